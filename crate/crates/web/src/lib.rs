//! Browser bindings: generate a family member, test two tables for
//! isomorphism, and print a canonical form.

use solviso::engine::{canon_group, solvable_iso, IsoOptions};
use solviso::families::make_family;
use solviso::GroupTable;
use wasm_bindgen::prelude::*;

/// Largest order accepted by the isomorphism and canonization calls, which
/// run on the page's main thread.
pub const MAX_ORDER: usize = 64;

fn parse_bounded(text: &str) -> Result<GroupTable, String> {
    let g = GroupTable::parse_cayley(text).map_err(|e| e.to_string())?;
    if g.order() > MAX_ORDER {
        return Err(format!(
            "order {} exceeds the demo limit of {MAX_ORDER}",
            g.order()
        ));
    }
    Ok(g)
}

/// The `.cayley` text of a family member; `params` are whitespace-separated.
pub fn generate_text(family: &str, params: &str) -> Result<String, String> {
    let nums = params
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<Vec<usize>, _>>()
        .map_err(|_| format!("parameters must be integers: {params:?}"))?;
    Ok(make_family(family, &nums)
        .map_err(|e| e.to_string())?
        .to_cayley())
}

/// "isomorphic" and a 1-based witness line, or "not isomorphic", followed by
/// the search counters.
pub fn iso_report(a: &str, b: &str) -> Result<String, String> {
    let (g, h) = (parse_bounded(a)?, parse_bounded(b)?);
    let out = solvable_iso(&g, &h, IsoOptions::default()).map_err(|e| e.to_string())?;
    let c = out.counters;
    let verdict = match &out.witness {
        Some(phi) => {
            let line: Vec<String> = phi.iter().map(|x| (x + 1).to_string()).collect();
            format!("isomorphic\n{}", line.join(" "))
        }
        None => "not isomorphic".to_string(),
    };
    Ok(format!(
        "{verdict}\nalpha {} bases {} series {} sequences {} canon_nodes {}\n",
        out.alpha, c.bases, c.series, c.sequences, c.canon_nodes
    ))
}

pub fn canonical_text(text: &str) -> Result<String, String> {
    let g = parse_bounded(text)?;
    Ok(canon_group(&g).map_err(|e| e.to_string())?.form.to_text())
}

#[wasm_bindgen]
pub fn generate(family: &str, params: &str) -> Result<String, JsError> {
    generate_text(family, params).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn isomorphic(a: &str, b: &str) -> Result<String, JsError> {
    iso_report(a, b).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn canonical_form(text: &str) -> Result<String, JsError> {
    canonical_text(text).map_err(|e| JsError::new(&e))
}

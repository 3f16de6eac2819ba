//! Timing both isomorphism tests over every same-order pair of the corpus.

use std::io::Write;
use std::time::Instant;

use crate::engine::{generator_enumeration_iso, solvable_iso, Counters, IsoOptions};
use crate::error::{Error, Result};
use crate::families::corpus;
use crate::group::GroupTable;

/// Largest order the benchmark accepts.
pub const MAX_BENCH_ORDER: usize = 64;

pub const CSV_HEADER: &str =
    "group_a,group_b,order,algo,verdict,micros,bases,series,sequences,canon_nodes";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub group_a: String,
    pub group_b: String,
    pub order: usize,
    pub algo: &'static str,
    pub iso: bool,
    pub micros: u128,
    pub counters: Counters,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        let c = &self.counters;
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            csv_field(&self.group_a),
            csv_field(&self.group_b),
            self.order,
            self.algo,
            if self.iso { "iso" } else { "not_iso" },
            self.micros,
            c.bases,
            c.series,
            c.sequences,
            c.canon_nodes
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `x -> n - 1 - x`, so the second group never shares labels with the first.
fn reversed(g: &GroupTable) -> GroupTable {
    let n = g.order();
    g.relabel(&(0..n).rev().collect::<Vec<_>>())
}

/// Runs both tests on every ordered pair of corpus groups of equal order up to
/// `max_order`, the second group relabeled. Fails if the two tests disagree.
pub fn run_bench(max_order: usize) -> Result<Vec<BenchRow>> {
    if max_order > MAX_BENCH_ORDER {
        return Err(Error::BadParams(format!(
            "benchmark order limit is {MAX_BENCH_ORDER}, got {max_order}"
        )));
    }
    let groups = corpus(max_order);
    let mut rows = Vec::new();
    for (name_a, a) in &groups {
        for (name_b, b) in groups.iter().filter(|(_, b)| b.order() == a.order()) {
            let b = reversed(b);
            let t = Instant::now();
            let out = solvable_iso(a, &b, IsoOptions::default())?;
            let hybrid = BenchRow {
                group_a: name_a.clone(),
                group_b: name_b.clone(),
                order: a.order(),
                algo: "hybrid",
                iso: out.witness.is_some(),
                micros: t.elapsed().as_micros(),
                counters: out.counters,
            };
            let t = Instant::now();
            let iso = generator_enumeration_iso(a, &b).is_some();
            let genenum = BenchRow {
                algo: "genenum",
                iso,
                micros: t.elapsed().as_micros(),
                counters: Counters::default(),
                ..hybrid.clone()
            };
            if hybrid.iso != genenum.iso {
                return Err(Error::WitnessVerificationFailed(format!(
                    "tests disagree on {name_a} and {name_b}"
                )));
            }
            rows.push(hybrid);
            rows.push(genenum);
        }
    }
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.to_csv())?;
    }
    Ok(())
}

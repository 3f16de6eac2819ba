//! Splitting a solvable group into a large-prime part and a small-prime part.

use crate::error::{Error, Result};
use crate::group::{GroupTable, Subgroup};
use crate::sylow::{all_sylow_bases, sylow_basis, SylowBasis};

/// `G = P1 P2` where every prime dividing `|P1|` exceeds `alpha` and every
/// prime dividing `|P2|` is at most `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlphaDecomposition {
    pub alpha: usize,
    pub p1: Subgroup,
    pub p2: Subgroup,
}

impl AlphaDecomposition {
    pub fn is_valid(&self, g: &GroupTable) -> bool {
        let primes_ok = |s: &Subgroup, large: bool| {
            crate::group::factorize(s.order())
                .primes()
                .all(|p| (p > self.alpha) == large)
        };
        primes_ok(&self.p1, true)
            && primes_ok(&self.p2, false)
            && self.p1.order() * self.p2.order() == g.order()
            && self.p1.intersection(&self.p2).order() == 1
    }

    pub fn map(&self, phi: &[usize]) -> AlphaDecomposition {
        AlphaDecomposition {
            alpha: self.alpha,
            p1: self.p1.map(phi),
            p2: self.p2.map(phi),
        }
    }
}

/// Groups the Sylow subgroups of a basis by whether their prime exceeds `alpha`.
pub fn alpha_split(g: &GroupTable, basis: &SylowBasis, alpha: usize) -> AlphaDecomposition {
    let side = |large: bool| {
        let seed: Vec<usize> = basis
            .entries
            .iter()
            .filter(|(p, _)| (*p > alpha) == large)
            .flat_map(|(_, s)| g.greedy_generators(s))
            .collect();
        g.subgroup_closure(&seed)
    };
    let dec = AlphaDecomposition {
        alpha,
        p1: side(true),
        p2: side(false),
    };
    assert_eq!(dec.p1.order() * dec.p2.order(), g.order());
    dec
}

/// Every distinct decomposition of `g` at `alpha`, one per class of Sylow bases.
pub fn all_alpha_decompositions(g: &GroupTable, alpha: usize) -> Result<Vec<AlphaDecomposition>> {
    let mut out: Vec<AlphaDecomposition> = all_sylow_bases(g)?
        .iter()
        .map(|b| alpha_split(g, b, alpha))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Fixes one decomposition of `g` and hands it, paired with each decomposition
/// of `h`, to `tester`; stops at the first pair the tester accepts.
pub fn alpha_decomp_iso<T>(
    g: &GroupTable,
    h: &GroupTable,
    alpha: usize,
    mut tester: impl FnMut(&AlphaDecomposition, &AlphaDecomposition) -> Result<Option<T>>,
) -> Result<Option<T>> {
    if !g.is_solvable() || !h.is_solvable() {
        return Err(Error::NotSolvable);
    }
    if g.order() != h.order() {
        return Ok(None);
    }
    let dg = alpha_split(g, &sylow_basis(g)?, alpha);
    for dh in all_alpha_decompositions(h, alpha)? {
        if let Some(found) = tester(&dg, &dh)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

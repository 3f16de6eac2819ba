//! Sylow subgroups and Sylow bases (pairwise permutable Sylow systems).

use crate::error::{Error, Result};
use crate::group::{factorize, GroupTable, Subgroup};

/// One Sylow subgroup per prime divisor of `|G|`, pairwise permutable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SylowBasis {
    pub entries: Vec<(usize, Subgroup)>,
}

impl SylowBasis {
    pub fn conjugate(&self, g: &GroupTable, x: usize) -> SylowBasis {
        SylowBasis {
            entries: self
                .entries
                .iter()
                .map(|(p, s)| (*p, g.conjugate_subgroup(s, x)))
                .collect(),
        }
    }

    /// Checks orders, one entry per prime and pairwise permutability.
    pub fn is_valid(&self, g: &GroupTable) -> bool {
        let f = factorize(g.order());
        if self.entries.len() != f.0.len() {
            return false;
        }
        let orders_ok = self
            .entries
            .iter()
            .zip(&f.0)
            .all(|((p, s), &(q, e))| *p == q && s.order() == q.pow(e));
        orders_ok
            && self
                .entries
                .iter()
                .enumerate()
                .all(|(i, (_, a))| self.entries[i + 1..].iter().all(|(_, b)| g.permutes(a, b)))
    }
}

fn is_power_of(mut k: usize, p: usize) -> bool {
    while k.is_multiple_of(p) {
        k /= p;
    }
    k == 1
}

/// A Sylow `p`-subgroup built by ascent through normalizers, always taking the
/// smallest-index eligible element.
pub fn sylow_subgroup(g: &GroupTable, p: usize) -> Result<Subgroup> {
    let target = factorize(g.order())
        .prime_power(p)
        .ok_or(Error::NoSuchPrime(p))?;
    let orders = g.element_orders();
    let x = (0..g.order())
        .find(|&x| orders[x] == p)
        .expect("Cauchy: an element of order p exists");
    let mut sub = g.subgroup_closure(&[x]);
    while sub.order() < target {
        let norm = g.normalizer(&sub);
        let y = norm
            .iter()
            .find(|&y| !sub.contains(y) && is_power_of(orders[y], p))
            .expect("a p-subgroup below Sylow order grows inside its normalizer");
        let mut seed = g.greedy_generators(&sub);
        seed.push(y);
        sub = g.subgroup_closure(&seed);
    }
    debug_assert_eq!(sub.order(), target);
    Ok(sub)
}

/// Every Sylow `p`-subgroup, in lexicographic order of member lists.
pub fn all_sylow_subgroups(g: &GroupTable, p: usize) -> Result<Vec<Subgroup>> {
    let base = sylow_subgroup(g, p)?;
    let mut all: Vec<Subgroup> = (0..g.order())
        .map(|x| g.conjugate_subgroup(&base, x))
        .collect();
    all.sort();
    all.dedup();
    assert_eq!(all.len() % p, 1 % p, "Sylow count must be 1 mod p");
    Ok(all)
}

/// The first Sylow basis found by backtracking over the Sylow subgroups of each
/// prime in increasing order.
pub fn sylow_basis(g: &GroupTable) -> Result<SylowBasis> {
    let primes: Vec<usize> = factorize(g.order()).primes().collect();
    let candidates = primes
        .iter()
        .map(|&p| all_sylow_subgroups(g, p))
        .collect::<Result<Vec<_>>>()?;

    fn search(g: &GroupTable, cands: &[Vec<Subgroup>], chosen: &mut Vec<Subgroup>) -> bool {
        let i = chosen.len();
        if i == cands.len() {
            return true;
        }
        for s in &cands[i] {
            if chosen.iter().all(|c| g.permutes(c, s)) {
                chosen.push(s.clone());
                if search(g, cands, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = Vec::new();
    if search(g, &candidates, &mut chosen) {
        debug_assert!(g.is_solvable());
        Ok(SylowBasis {
            entries: primes.into_iter().zip(chosen).collect(),
        })
    } else {
        debug_assert!(!g.is_solvable());
        Err(Error::NotSolvable)
    }
}

/// All Sylow bases: the conjugates of one basis, deduplicated and sorted.
pub fn all_sylow_bases(g: &GroupTable) -> Result<Vec<SylowBasis>> {
    let basis = sylow_basis(g)?;
    let mut all: Vec<SylowBasis> = (0..g.order()).map(|x| basis.conjugate(g, x)).collect();
    all.sort();
    all.dedup();
    assert!(all.len() <= g.order());
    Ok(all)
}

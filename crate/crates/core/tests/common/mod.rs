//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use solviso::{factorize, GroupTable, Subgroup};

/// Every subgroup of `g`, by closing subgroups found so far under one more
/// element until nothing new appears.
pub fn all_subgroups(g: &GroupTable) -> Vec<Subgroup> {
    let mut subs = vec![g.trivial_subgroup()];
    let mut i = 0;
    while i < subs.len() {
        for x in 0..g.order() {
            if subs[i].contains(x) {
                continue;
            }
            let mut seed = subs[i].to_vec();
            seed.push(x);
            let s = g.subgroup_closure(&seed);
            if !subs.contains(&s) {
                subs.push(s);
            }
        }
        i += 1;
    }
    subs
}

pub fn is_prime(k: usize) -> bool {
    let f = factorize(k);
    f.0.len() == 1 && f.0[0].1 == 1
}

/// Number of composition series of `top`, by dynamic programming over the
/// subgroup lattice with brute-force normality.
pub fn lattice_series_count(g: &GroupTable, lattice: &[Subgroup], top: &Subgroup) -> usize {
    let mut subs: Vec<&Subgroup> = lattice.iter().filter(|s| s.is_subgroup_of(top)).collect();
    subs.sort_by_key(|s| s.order());
    let mut count = vec![0usize; subs.len()];
    count[0] = 1;
    for j in 1..subs.len() {
        for i in 0..j {
            let (t, s) = (subs[i], subs[j]);
            if t.is_subgroup_of(s)
                && is_prime(s.order() / t.order())
                && s.iter()
                    .all(|x| t.iter().all(|y| t.contains(g.mul(g.mul(x, y), g.inv(x)))))
            {
                count[j] += count[i];
            }
        }
    }
    count[subs.len() - 1]
}

/// Every choice of one Sylow subgroup per prime, pairwise permutable, with
/// Sylow subgroups taken from the full lattice and permutability checked on
/// element products.
pub fn brute_force_sylow_systems(g: &GroupTable, lattice: &[Subgroup]) -> Vec<Vec<Subgroup>> {
    let f = factorize(g.order());
    let per_prime: Vec<Vec<&Subgroup>> =
        f.0.iter()
            .map(|&(p, e)| lattice.iter().filter(|s| s.order() == p.pow(e)).collect())
            .collect();
    let permutes = |a: &Subgroup, b: &Subgroup| {
        let prod = |x: &Subgroup, y: &Subgroup| {
            let mut v: Vec<usize> = x
                .iter()
                .flat_map(|s| y.iter().map(move |t| (s, t)))
                .map(|(s, t)| g.mul(s, t))
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        prod(a, b) == prod(b, a)
    };
    let mut out: Vec<Vec<Subgroup>> = vec![Vec::new()];
    for choices in per_prime {
        let mut next = Vec::new();
        for sys in &out {
            for &s in &choices {
                if sys.iter().all(|t| permutes(t, s)) {
                    let mut v = sys.clone();
                    v.push(s.clone());
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

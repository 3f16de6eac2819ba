//! Subgroup chains and composition series.

use crate::decomposition::AlphaDecomposition;
use crate::error::Result;
use crate::group::{factorize, GroupTable, Subgroup};

/// `{e} = chain[0] < chain[1] < ... < chain[m]`, each normal of prime index in
/// the next.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositionSeries {
    pub chain: Vec<Subgroup>,
}

impl CompositionSeries {
    pub fn len(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn top(&self) -> &Subgroup {
        self.chain.last().unwrap()
    }

    pub fn map(&self, phi: &[usize]) -> CompositionSeries {
        CompositionSeries {
            chain: self.chain.iter().map(|s| s.map(phi)).collect(),
        }
    }

    /// Orders of the composition factors, bottom up.
    pub fn factor_orders(&self) -> Vec<usize> {
        self.chain
            .windows(2)
            .map(|w| w[1].order() / w[0].order())
            .collect()
    }
}

/// A large-prime subgroup together with a composition series of its complement.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlphaCompositionPair {
    pub p1: Subgroup,
    pub s2: CompositionSeries,
}

fn is_prime(k: usize) -> bool {
    let f = factorize(k);
    f.0.len() == 1 && f.0[0].1 == 1
}

/// Visits every chain `{e} = G_0 < G_1 < ... < G_k = P` with
/// `G_{i+1} = <G_i, x>`, taking one `x` per coset of `G_i` and one branch per
/// distinct resulting subgroup. Returns the number of chains visited.
pub fn for_each_subgroup_chain(
    g: &GroupTable,
    p: &Subgroup,
    mut visit: impl FnMut(&[Subgroup]),
) -> usize {
    let mut count = 0;
    let mut chain = vec![g.trivial_subgroup()];
    let mut gens = Vec::new();
    chain_dfs(g, p, &mut chain, &mut gens, &mut |c| {
        count += 1;
        visit(c)
    });
    count
}

fn chain_dfs(
    g: &GroupTable,
    p: &Subgroup,
    chain: &mut Vec<Subgroup>,
    gens: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[Subgroup]),
) {
    let cur = chain.last().unwrap().clone();
    if cur == *p {
        visit(chain);
        return;
    }
    for next in extensions(g, p, &cur, gens) {
        let (sub, x) = next;
        chain.push(sub);
        gens.push(x);
        chain_dfs(g, p, chain, gens, visit);
        gens.pop();
        chain.pop();
    }
}

/// `<cur, x>` for one `x` per nontrivial coset of `cur` in `p`, deduplicated.
fn extensions(
    g: &GroupTable,
    p: &Subgroup,
    cur: &Subgroup,
    gens: &[usize],
) -> Vec<(Subgroup, usize)> {
    let mut covered = cur.members().clone();
    let mut out: Vec<(Subgroup, usize)> = Vec::new();
    let members = cur.to_vec();
    for x in p.iter() {
        if covered.contains(x) {
            continue;
        }
        for &h in &members {
            covered.insert(g.mul(x, h));
        }
        let mut seed = gens.to_vec();
        seed.push(x);
        let sub = g.subgroup_closure(&seed);
        if !out.iter().any(|(s, _)| *s == sub) {
            out.push((sub, x));
        }
    }
    out
}

pub fn is_composition_series(g: &GroupTable, chain: &[Subgroup]) -> bool {
    chain.first().is_some_and(|s| s.order() == 1)
        && chain.windows(2).all(|w| {
            w[0].is_subgroup_of(&w[1])
                && w[1].order() % w[0].order() == 0
                && is_prime(w[1].order() / w[0].order())
                && g.is_normal(&w[0], &w[1]).unwrap_or(false)
        })
}

/// Visits the composition series of `p` in lexicographic order of their
/// chains. The visitor returns `false` to stop. Returns whether the
/// enumeration ran to completion.
///
/// Only prime-index normal extensions are followed, so the search visits the
/// same series the raw chain enumeration would keep after filtering.
pub fn for_each_composition_series(
    g: &GroupTable,
    p: &Subgroup,
    mut visit: impl FnMut(&CompositionSeries) -> bool,
) -> bool {
    let mut series = CompositionSeries {
        chain: vec![g.trivial_subgroup()],
    };
    series_dfs(g, p, &mut series, &mut Vec::new(), &mut visit)
}

fn series_dfs(
    g: &GroupTable,
    p: &Subgroup,
    series: &mut CompositionSeries,
    gens: &mut Vec<usize>,
    visit: &mut dyn FnMut(&CompositionSeries) -> bool,
) -> bool {
    let cur = series.top().clone();
    if cur == *p {
        return visit(series);
    }
    let mut children: Vec<(Subgroup, usize)> = Vec::new();
    for x in p.iter() {
        if cur.contains(x) {
            continue;
        }
        // x must normalize the current subgroup for it to be normal in <cur, x>.
        if !gens.iter().all(|&h| cur.contains(g.conj(x, h))) {
            continue;
        }
        let mut seed = gens.clone();
        seed.push(x);
        let sub = g.subgroup_closure(&seed);
        if is_prime(sub.order() / cur.order()) && !children.iter().any(|(s, _)| *s == sub) {
            children.push((sub, x));
        }
    }
    children.sort();
    for (sub, x) in children {
        series.chain.push(sub);
        gens.push(x);
        let go_on = series_dfs(g, p, series, gens, visit);
        gens.pop();
        series.chain.pop();
        if !go_on {
            return false;
        }
    }
    true
}

/// All composition series of `p`, sorted lexicographically by their chains.
pub fn enumerate_composition_series(g: &GroupTable, p: &Subgroup) -> Vec<CompositionSeries> {
    let mut out = Vec::new();
    for_each_composition_series(g, p, |s| {
        out.push(s.clone());
        true
    });
    out
}

/// The lexicographically least composition series of `p`.
pub fn first_composition_series(g: &GroupTable, p: &Subgroup) -> CompositionSeries {
    let mut first = None;
    for_each_composition_series(g, p, |s| {
        first = Some(s.clone());
        false
    });
    first.expect("solvable subgroups have a composition series")
}

/// Fixes the first series of `dg.p2` and offers it, paired with every series
/// of `dh.p2`, to `tester`; stops at the first accepted pair.
pub fn alpha_pair_iso_loop<T>(
    g: &GroupTable,
    dg: &AlphaDecomposition,
    h: &GroupTable,
    dh: &AlphaDecomposition,
    mut tester: impl FnMut(&AlphaCompositionPair, &AlphaCompositionPair) -> Result<Option<T>>,
) -> Result<Option<T>> {
    let pg = AlphaCompositionPair {
        p1: dg.p1.clone(),
        s2: first_composition_series(g, &dg.p2),
    };
    let mut outcome = Ok(None);
    for_each_composition_series(h, &dh.p2, |s2| {
        let ph = AlphaCompositionPair {
            p1: dh.p1.clone(),
            s2: s2.clone(),
        };
        outcome = tester(&pg, &ph);
        matches!(outcome, Ok(None))
    });
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cyclic, elementary_abelian, symmetric};

    /// Every subgroup, by closing the identity under single-element extensions
    /// until no new set appears.
    fn all_subgroups(g: &GroupTable) -> Vec<Subgroup> {
        let mut subs = vec![g.trivial_subgroup()];
        let mut i = 0;
        while i < subs.len() {
            for x in 0..g.order() {
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

    /// Counts composition series of the whole group by dynamic programming
    /// over the subgroup lattice, with brute-force normality.
    fn lattice_series_count(g: &GroupTable) -> usize {
        let mut subs = all_subgroups(g);
        subs.sort_by_key(|s| s.order());
        let mut count = vec![0usize; subs.len()];
        count[0] = 1;
        for j in 1..subs.len() {
            for i in 0..j {
                let (t, s) = (&subs[i], &subs[j]);
                if t.is_subgroup_of(s)
                    && is_prime(s.order() / t.order())
                    && s.iter().all(|x| t.iter().all(|y| t.contains(g.conj(x, y))))
                {
                    count[j] += count[i];
                }
            }
        }
        count[subs.len() - 1]
    }

    #[test]
    fn chains_of_z4() {
        let z4 = cyclic(4).unwrap();
        let mut chains = Vec::new();
        for_each_subgroup_chain(&z4, &z4.whole(), |c| {
            chains.push(c.iter().map(Subgroup::order).collect::<Vec<_>>())
        });
        assert!(chains.contains(&vec![1, 2, 4]));
        assert!(chains.contains(&vec![1, 4]));
        assert_eq!(chains.len(), 2);
    }

    #[test]
    fn chains_of_trivial_and_klein() {
        let t = cyclic(1).unwrap();
        assert_eq!(for_each_subgroup_chain(&t, &t.whole(), |_| {}), 1);
        let v = elementary_abelian(2, 2).unwrap();
        let mut maximal = 0;
        for_each_subgroup_chain(&v, &v.whole(), |c| {
            if c.len() == 3 {
                maximal += 1;
            }
        });
        assert_eq!(maximal, 3);
    }

    #[test]
    fn composition_recognition() {
        let z4 = cyclic(4).unwrap();
        let half = z4.subgroup_closure(&[2]);
        assert!(is_composition_series(
            &z4,
            &[z4.trivial_subgroup(), half, z4.whole()]
        ));
        assert!(!is_composition_series(
            &z4,
            &[z4.trivial_subgroup(), z4.whole()]
        ));
        let s3 = symmetric(3).unwrap();
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let chain = [s3.trivial_subgroup(), s3.subgroup_closure(&[t]), s3.whole()];
        assert!(!is_composition_series(&s3, &chain));
    }

    #[test]
    fn series_counts_match_lattice() {
        let cases = [
            (cyclic(8).unwrap(), 1),
            (cyclic(6).unwrap(), 2),
            (elementary_abelian(2, 2).unwrap(), 3),
            (elementary_abelian(3, 2).unwrap(), 4),
            (elementary_abelian(5, 2).unwrap(), 6),
        ];
        for (g, expected) in cases {
            let series = enumerate_composition_series(&g, &g.whole());
            assert_eq!(series.len(), expected);
            assert_eq!(lattice_series_count(&g), expected);
        }
        for g in [symmetric(4).unwrap(), cyclic(12).unwrap()] {
            let series = enumerate_composition_series(&g, &g.whole());
            assert_eq!(series.len(), lattice_series_count(&g));
            assert!(series.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(first_composition_series(&g, &g.whole()), series[0]);
        }
    }

    #[test]
    fn series_are_valid_and_agree_on_factors() {
        let g = symmetric(4).unwrap();
        let series = enumerate_composition_series(&g, &g.whole());
        let mut reference = series[0].factor_orders();
        reference.sort();
        for s in &series {
            assert!(is_composition_series(&g, &s.chain));
            let mut f = s.factor_orders();
            f.sort();
            assert_eq!(f, reference);
        }
        // The raw chains contain every series.
        let mut raw = Vec::new();
        for_each_subgroup_chain(&g, &g.whole(), |c| raw.push(c.to_vec()));
        for s in &series {
            assert!(raw.contains(&s.chain));
        }
    }

    #[test]
    fn series_of_a_proper_subgroup() {
        let g = symmetric(4).unwrap();
        let sub = g.subgroup_closure(&[1]);
        let series = enumerate_composition_series(&g, &sub);
        assert!(!series.is_empty());
        for s in series {
            assert_eq!(s.top(), &sub);
        }
    }
}

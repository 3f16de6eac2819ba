//! Isomorphism testing and canonical forms built from decompositions,
//! composition series, generating sequences and graph canonization.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use crate::decomposition::{all_alpha_decompositions, alpha_decomp_iso, AlphaDecomposition};
use crate::error::{Error, Result};
use crate::graphenc::{build_x, decode_y, AugmentedPair, XGraph};
use crate::graphiso::{canonize_colored_graph, isomorphism_between, CanonicalGraph};
use crate::group::{GroupTable, Subgroup};
use crate::ordering::{
    enumerate_generating_sequences, for_each_generating_sequence, min_generating_length,
};
use crate::series::{alpha_pair_iso_loop, for_each_composition_series, AlphaCompositionPair};

/// Default threshold: `max(2, round(log n / log log n))` with base-2 logs.
pub fn choose_alpha(n: usize) -> usize {
    if n < 4 {
        return 2;
    }
    let l = (n as f64).log2();
    ((l / l.log2()).round() as usize).max(2)
}

/// Reference isomorphism test: maps the greedy generators of `g` to every
/// order-compatible tuple of `h`, extending along the Cayley graph and
/// abandoning a tuple as soon as the extension is inconsistent or
/// non-injective.
pub fn generator_enumeration_iso(g: &GroupTable, h: &GroupTable) -> Option<Vec<usize>> {
    let n = g.order();
    if h.order() != n || g.order_profile(0..n) != h.order_profile(0..n) {
        return None;
    }
    let gens = g.greedy_generators(&g.whole());
    let (go, ho) = (g.element_orders(), h.element_orders());
    let mut images = Vec::with_capacity(gens.len());
    enumerate_images(g, h, &gens, &go, &ho, &mut images)
}

fn enumerate_images(
    g: &GroupTable,
    h: &GroupTable,
    gens: &[usize],
    go: &[usize],
    ho: &[usize],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let i = images.len();
    if i == gens.len() {
        let phi = extend_images(g, h, gens, images)?;
        return g.is_isomorphism(h, &phi).then_some(phi);
    }
    for y in 0..h.order() {
        if ho[y] != go[gens[i]] {
            continue;
        }
        images.push(y);
        if extend_images(g, h, &gens[..=i], images).is_some() {
            if let Some(phi) = enumerate_images(g, h, gens, go, ho, images) {
                return Some(phi);
            }
        }
        images.pop();
    }
    None
}

/// The homomorphism on `<gens>` sending `gens[i]` to `images[i]`, if the
/// assignment is consistent along every Cayley graph edge and injective.
/// Elements outside the subgroup map to `usize::MAX`.
fn extend_images(
    g: &GroupTable,
    h: &GroupTable,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut phi = vec![usize::MAX; g.order()];
    let mut used = vec![false; h.order()];
    phi[g.identity()] = h.identity();
    used[h.identity()] = true;
    let mut queue = vec![g.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&s, &t) in gens.iter().zip(images) {
            let (xs, y) = (g.mul(x, s), h.mul(phi[x], t));
            if phi[xs] == usize::MAX {
                if std::mem::replace(&mut used[y], true) {
                    return None;
                }
                phi[xs] = y;
                queue.push(xs);
            } else if phi[xs] != y {
                return None;
            }
        }
    }
    Some(phi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoOptions {
    /// Prime threshold; `None` uses [`choose_alpha`].
    pub alpha: Option<usize>,
    /// Skip candidates whose isomorphism invariants already disagree.
    pub prefilter: bool,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions {
            alpha: None,
            prefilter: true,
        }
    }
}

/// Work done by one isomorphism test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Decompositions of the second group tried.
    pub bases: u64,
    /// Composition series of the second group tried.
    pub series: u64,
    /// Generating sequences of the second group tried.
    pub sequences: u64,
    /// Search nodes spent in graph canonization.
    pub canon_nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoOutcome {
    /// A verified isomorphism `g -> h`, or `None` if the groups differ.
    pub witness: Option<Vec<usize>>,
    pub alpha: usize,
    pub counters: Counters,
}

/// The fixed side of the search: one augmented pair of the first group with
/// its encoding, canonical form and invariants.
struct FixedSide {
    pair: AugmentedPair,
    x: XGraph,
    canon: CanonicalGraph,
    series_sig: Vec<Vec<usize>>,
    seq_sig: Vec<usize>,
}

fn decomposition_signature(g: &GroupTable, d: &AlphaDecomposition) -> (Vec<usize>, Vec<usize>) {
    (g.order_profile(d.p1.iter()), g.order_profile(d.p2.iter()))
}

fn series_signature(g: &GroupTable, pair: &AlphaCompositionPair) -> Vec<Vec<usize>> {
    pair.s2
        .chain
        .iter()
        .map(|s| g.order_profile(s.iter()))
        .collect()
}

/// Orders of the generators, of their pairwise products and whether they commute.
fn sequence_signature(g: &GroupTable, seq: &[usize]) -> Vec<usize> {
    let mut sig: Vec<usize> = seq.iter().map(|&x| g.element_order(x)).collect();
    for (i, &a) in seq.iter().enumerate() {
        for &b in &seq[i + 1..] {
            sig.push(g.element_order(g.mul(a, b)));
            sig.push(usize::from(g.mul(a, b) == g.mul(b, a)));
        }
    }
    sig
}

/// Decides whether `g` and `h` are isomorphic. One decomposition, series and
/// generating sequence of `g` are fixed; those of `h` are enumerated, and each
/// candidate is compared by canonical form of its graph encoding. A positive
/// answer carries a witness checked against both tables.
pub fn solvable_iso(g: &GroupTable, h: &GroupTable, opts: IsoOptions) -> Result<IsoOutcome> {
    if !g.is_solvable() || !h.is_solvable() {
        return Err(Error::NotSolvable);
    }
    let n = g.order();
    let alpha = opts.alpha.unwrap_or_else(|| choose_alpha(n));
    let mut counters = Counters::default();
    let quick_reject =
        h.order() != n || (opts.prefilter && g.order_profile(0..n) != h.order_profile(0..n));
    if quick_reject {
        return Ok(IsoOutcome {
            witness: None,
            alpha,
            counters,
        });
    }
    let mut fixed: Option<FixedSide> = None;
    let witness = alpha_decomp_iso(g, h, alpha, |dg, dh| {
        counters.bases += 1;
        if opts.prefilter && decomposition_signature(g, dg) != decomposition_signature(h, dh) {
            return Ok(None);
        }
        alpha_pair_iso_loop(g, dg, h, dh, |pg, ph| {
            counters.series += 1;
            if fixed.is_none() {
                let pair = AugmentedPair {
                    p1: pg.p1.clone(),
                    s2: pg.s2.clone(),
                    gens: g.greedy_generators(&pg.p1),
                };
                let x = build_x(g, &pair)?;
                let canon = canonize_colored_graph(&x.graph);
                counters.canon_nodes += canon.nodes;
                fixed = Some(FixedSide {
                    series_sig: series_signature(g, pg),
                    seq_sig: sequence_signature(g, &pair.gens),
                    pair,
                    x,
                    canon,
                });
            }
            let fs = fixed.as_ref().unwrap();
            if opts.prefilter && series_signature(h, ph) != fs.series_sig {
                return Ok(None);
            }
            let mut found = Ok(None);
            for_each_generating_sequence(h, &ph.p1, fs.pair.gens.len(), |seq| {
                counters.sequences += 1;
                if opts.prefilter && sequence_signature(h, seq) != fs.seq_sig {
                    return true;
                }
                let pair = AugmentedPair {
                    p1: ph.p1.clone(),
                    s2: ph.s2.clone(),
                    gens: seq.to_vec(),
                };
                found = match_fixed(g, fs, h, &pair, &mut counters);
                matches!(found, Ok(None))
            });
            found
        })
    })?;
    #[cfg(debug_assertions)]
    if n <= 32 {
        debug_assert_eq!(witness.is_some(), generator_enumeration_iso(g, h).is_some());
    }
    Ok(IsoOutcome {
        witness,
        alpha,
        counters,
    })
}

/// A verified isomorphism between two augmented pairs, found by comparing
/// canonical forms of their graph encodings.
pub fn augmented_pair_iso(
    g: &GroupTable,
    pa: &AugmentedPair,
    h: &GroupTable,
    pb: &AugmentedPair,
) -> Result<Option<Vec<usize>>> {
    if g.order() != h.order()
        || pa.p1.order() != pb.p1.order()
        || pa.s2.len() != pb.s2.len()
        || pa.gens.len() != pb.gens.len()
    {
        return Ok(None);
    }
    let x = build_x(g, pa)?;
    let canon = canonize_colored_graph(&x.graph);
    let fixed = FixedSide {
        pair: pa.clone(),
        x,
        canon,
        series_sig: Vec::new(),
        seq_sig: Vec::new(),
    };
    match_fixed(g, &fixed, h, pb, &mut Counters::default())
}

/// Compares one candidate pair of `h` with the fixed side and, on a match,
/// reads the group isomorphism off the composed graph isomorphism.
fn match_fixed(
    g: &GroupTable,
    fs: &FixedSide,
    h: &GroupTable,
    pair: &AugmentedPair,
    counters: &mut Counters,
) -> Result<Option<Vec<usize>>> {
    let x = build_x(h, pair)?;
    let canon = canonize_colored_graph(&x.graph);
    counters.canon_nodes += canon.nodes;
    let Some(theta) = isomorphism_between(&fs.x.graph, &fs.canon, &x.graph, &canon) else {
        return Ok(None);
    };
    let mut elem_of = vec![usize::MAX; x.graph.vertex_count()];
    for (y, &v) in x.elem_vertex.iter().enumerate() {
        elem_of[v] = y;
    }
    let phi: Vec<usize> =
        fs.x.elem_vertex
            .iter()
            .map(|&v| elem_of[theta[v]])
            .collect();
    if phi.contains(&usize::MAX) || !fs.pair.is_pair_isomorphism(g, pair, h, &phi) {
        return Err(Error::WitnessVerificationFailed(
            "graph isomorphism does not induce a pair isomorphism".into(),
        ));
    }
    Ok(Some(phi))
}

/// Canonical form of an augmented pair: the decoded table (flat, row-major),
/// the large-prime subgroup, the series bottom up and the generating sequence,
/// all on canonical labels `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalPairForm {
    pub order: usize,
    pub table: Vec<usize>,
    pub p1: Vec<usize>,
    pub series: Vec<Vec<usize>>,
    pub gens: Vec<usize>,
}

/// A canonical form with the relabeling `psi` from the input group onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonized<F> {
    pub form: F,
    pub psi: Vec<usize>,
    pub stats: CanonStats,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CanonStats {
    pub decompositions: u64,
    /// Candidate pairs enumerated, including those skipped by orbit pruning.
    pub candidates: u64,
    /// Candidate pairs whose encoding was canonized.
    pub canonized: u64,
    pub canon_nodes: u64,
}

pub fn canon_augmented_pair(
    g: &GroupTable,
    pair: &AugmentedPair,
) -> Result<Canonized<CanonicalPairForm>> {
    let x = build_x(g, pair)?;
    let canon = canonize_colored_graph(&x.graph);
    let decoded = decode_y(&canon.graph, x.ell, x.m)?;
    let psi: Vec<usize> = x
        .elem_vertex
        .iter()
        .map(|&v| decoded.elem_vertex.binary_search(&canon.labeling[v]))
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| {
            Error::WitnessVerificationFailed("element vertex lost in canonization".into())
        })?;
    if !pair.is_pair_isomorphism(g, &decoded.pair, &decoded.table, &psi) {
        return Err(Error::WitnessVerificationFailed(
            "canonical labeling does not induce a pair isomorphism".into(),
        ));
    }
    let t = &decoded.table;
    let form = CanonicalPairForm {
        order: t.order(),
        table: (0..t.order())
            .flat_map(|a| (0..t.order()).map(move |b| t.mul(a, b)))
            .collect(),
        p1: decoded.pair.p1.to_vec(),
        series: decoded.pair.s2.chain.iter().map(Subgroup::to_vec).collect(),
        gens: decoded.pair.gens.clone(),
    };
    Ok(Canonized {
        form,
        psi,
        stats: CanonStats {
            candidates: 1,
            canonized: 1,
            canon_nodes: canon.nodes,
            ..CanonStats::default()
        },
    })
}

/// Canonical form of a group together with a decomposition: the table and
/// both parts on canonical labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalDecompForm {
    pub order: usize,
    pub table: Vec<usize>,
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
}

impl CanonicalDecompForm {
    pub fn to_group(&self) -> GroupTable {
        GroupTable::validate_flat(self.order, self.table.clone())
            .expect("canonical tables are decoded and validated groups")
    }

    /// The table in the text format with 1-based labels, followed by both
    /// parts as 1-based member lists.
    pub fn to_text(&self) -> String {
        let one_based = |v: &[usize]| {
            v.iter()
                .map(|x| (x + 1).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "{}large: {}\nsmall: {}\n",
            self.to_group().to_cayley(),
            one_based(&self.p1),
            one_based(&self.p2)
        )
    }
}

/// Closes a set of candidates under a growing list of permutations of the
/// group, so that candidates equivalent to one already canonized are skipped.
struct OrbitPruner<C> {
    known: HashSet<C>,
    perms: Vec<Vec<usize>>,
}

impl<C: Clone + Eq + Hash> OrbitPruner<C> {
    fn new(perms: Vec<Vec<usize>>) -> Self {
        OrbitPruner {
            known: HashSet::new(),
            perms,
        }
    }

    fn contains(&self, c: &C) -> bool {
        self.known.contains(c)
    }

    /// Adds the orbit of `c`.
    fn add(&mut self, c: C, act: &impl Fn(&C, &[usize]) -> C) {
        if self.known.insert(c.clone()) {
            self.close(vec![c], act);
        }
    }

    /// Adds a permutation and closes the known set under it.
    fn add_perm(&mut self, perm: Vec<usize>, act: &impl Fn(&C, &[usize]) -> C) {
        let images: Vec<C> = self.known.iter().map(|c| act(c, &perm)).collect();
        self.perms.push(perm);
        let fresh: Vec<C> = images
            .into_iter()
            .filter(|c| self.known.insert(c.clone()))
            .collect();
        self.close(fresh, act);
    }

    fn close(&mut self, mut stack: Vec<C>, act: &impl Fn(&C, &[usize]) -> C) {
        while let Some(c) = stack.pop() {
            for p in &self.perms {
                let d = act(&c, p);
                if self.known.insert(d.clone()) {
                    stack.push(d);
                }
            }
        }
    }
}

fn inner_automorphisms(g: &GroupTable, of: &Subgroup) -> Vec<Vec<usize>> {
    g.greedy_generators(of)
        .into_iter()
        .map(|x| (0..g.order()).map(|y| g.conj(x, y)).collect())
        .collect()
}

/// Canonical form of `(g, d)`: the least pair form over every composition
/// series of `d.p2` and every shortest generating sequence of `d.p1`,
/// restricted to the table and the two parts.
///
/// Two candidates with equal pair forms differ by an automorphism of `g`
/// preserving `d`; such automorphisms, together with conjugations by the
/// common normalizer of both parts, are used to skip candidates in orbits
/// already covered.
pub fn canon_alpha_decomp(
    g: &GroupTable,
    d: &AlphaDecomposition,
) -> Result<Canonized<CanonicalDecompForm>> {
    let k = min_generating_length(g, &d.p1);
    let sequences = enumerate_generating_sequences(g, &d.p1, k);
    let stabilizer = g.normalizer(&d.p1).intersection(&g.normalizer(&d.p2));
    let act = |c: &AugmentedPair, p: &[usize]| c.map(p);
    let mut pruner = OrbitPruner::new(inner_automorphisms(g, &stabilizer));
    let mut by_form: HashMap<CanonicalPairForm, Vec<usize>> = HashMap::new();
    let mut best: Option<Canonized<CanonicalPairForm>> = None;
    let mut stats = CanonStats {
        decompositions: 1,
        ..CanonStats::default()
    };
    let mut failure = None;
    for_each_composition_series(g, &d.p2, |s2| {
        for seq in &sequences {
            stats.candidates += 1;
            let cand = AugmentedPair {
                p1: d.p1.clone(),
                s2: s2.clone(),
                gens: seq.clone(),
            };
            if pruner.contains(&cand) {
                continue;
            }
            let c = match canon_augmented_pair(g, &cand) {
                Ok(c) => c,
                Err(e) => {
                    failure = Some(e);
                    return false;
                }
            };
            stats.canonized += 1;
            stats.canon_nodes += c.stats.canon_nodes;
            if let Some(psi_d) = by_form.get(&c.form) {
                let mut inv_d = vec![0; psi_d.len()];
                for (x, &y) in psi_d.iter().enumerate() {
                    inv_d[y] = x;
                }
                let sigma: Vec<usize> = c.psi.iter().map(|&y| inv_d[y]).collect();
                debug_assert!(g.is_isomorphism(g, &sigma));
                pruner.known.insert(cand);
                pruner.add_perm(sigma, &act);
                continue;
            }
            by_form.insert(c.form.clone(), c.psi.clone());
            pruner.add(cand, &act);
            if best.as_ref().is_none_or(|b| c.form < b.form) {
                best = Some(c);
            }
        }
        true
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let best = best.expect("every decomposition part has a series and a generating sequence");
    let f = best.form;
    Ok(Canonized {
        form: CanonicalDecompForm {
            order: f.order,
            table: f.table,
            p1: f.p1,
            p2: f.series.last().cloned().unwrap_or_default(),
        },
        psi: best.psi,
        stats,
    })
}

/// Canonical form of a solvable group: the least decomposition form over all
/// decompositions at the default threshold. Decompositions conjugate to one
/// already canonized are skipped.
pub fn canon_group(g: &GroupTable) -> Result<Canonized<CanonicalDecompForm>> {
    if !g.is_solvable() {
        return Err(Error::NotSolvable);
    }
    let alpha = choose_alpha(g.order());
    let act = |d: &AlphaDecomposition, p: &[usize]| d.map(p);
    let mut pruner = OrbitPruner::new(inner_automorphisms(g, &g.whole()));
    let mut best: Option<Canonized<CanonicalDecompForm>> = None;
    let mut stats = CanonStats::default();
    for d in all_alpha_decompositions(g, alpha)? {
        if pruner.contains(&d) {
            continue;
        }
        let c = canon_alpha_decomp(g, &d)?;
        stats.decompositions += 1;
        stats.candidates += c.stats.candidates;
        stats.canonized += c.stats.canonized;
        stats.canon_nodes += c.stats.canon_nodes;
        pruner.add(d, &act);
        if best.as_ref().is_none_or(|b| c.form < b.form) {
            best = Some(c);
        }
    }
    let mut best = best.expect("every solvable group has a decomposition");
    best.stats = stats;
    #[cfg(debug_assertions)]
    if g.order() <= 32 {
        debug_assert!(generator_enumeration_iso(g, &best.form.to_group()).is_some());
    }
    Ok(best)
}

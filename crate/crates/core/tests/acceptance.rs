//! Acceptance checks over the group corpus. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any criterion fails.

mod common;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use solviso::bench::run_bench;
use solviso::decomposition::{all_alpha_decompositions, alpha_split, AlphaDecomposition};
use solviso::engine::{
    augmented_pair_iso, canon_group, choose_alpha, generator_enumeration_iso, solvable_iso,
    IsoOptions,
};
use solviso::families::{
    alternating, corpus, cyclic, elementary_abelian, special_linear2, symmetric,
};
use solviso::graphenc::{build_x, decode_y, AugmentedPair};
use solviso::graphiso::{are_graphs_isomorphic, canonize_colored_graph};
use solviso::ordering::{enumerate_generating_sequences, min_generating_length};
use solviso::series::{
    enumerate_composition_series, first_composition_series, for_each_subgroup_chain,
};
use solviso::sylow::{all_sylow_bases, sylow_basis};
use solviso::{factorize, Error, GroupTable, Subgroup};

use common::{all_subgroups, brute_force_sylow_systems, lattice_series_count, random_perm};

/// Suite wall-clock limit in seconds.
const TIME_LIMIT_SECS: f64 = 600.0;
/// Random relabelings per group for canonical-form invariance.
const RELABELINGS: usize = 20;
/// Largest order for exhaustive round trips and series-count comparisons.
const EXHAUSTIVE_ORDER: usize = 32;
/// Largest order for exhaustive Sylow-system comparisons.
const SYLOW_ORDER: usize = 24;
const SEED: u64 = 0x5eed;

type Corpus = Vec<(String, GroupTable)>;

struct Outcome {
    pass: bool,
    detail: String,
}

/// Counts positive answers and how many of them verified independently.
#[derive(Default)]
struct Witnesses {
    positives: usize,
    verified: usize,
}

impl Witnesses {
    fn record(&mut self, ok: bool) {
        self.positives += 1;
        self.verified += usize::from(ok);
    }
}

fn smallest_prime(n: usize) -> f64 {
    factorize(n).smallest_prime().unwrap_or(2) as f64
}

/// `|P|^((1/2) log_p |P| + 3)` with `p` the smallest prime dividing `|P|`.
fn series_bound(order: usize) -> f64 {
    if order == 1 {
        return 1.0;
    }
    let n = order as f64;
    n.powf(0.5 * n.ln() / smallest_prime(order).ln() + 3.0)
}

fn default_decomposition(g: &GroupTable) -> AlphaDecomposition {
    alpha_split(g, &sylow_basis(g).unwrap(), choose_alpha(g.order()))
}

fn oracle_equivalence(corpus: &Corpus, rng: &mut ChaCha8Rng, w: &mut Witnesses) -> Outcome {
    let raw = IsoOptions {
        prefilter: false,
        ..IsoOptions::default()
    };
    let (mut pairs, mut raw_pairs, mut mismatches, mut over_budget) = (0, 0, 0, 0);
    for (_, a) in corpus {
        let n = a.order();
        let d = default_decomposition(a);
        let k = a.greedy_generators(&d.p1).len() as u32;
        let q1 = d.p1.order() as f64;
        if f64::from(k) > q1.log2().max(0.0) {
            over_budget += 1;
        }
        for (_, b) in corpus {
            let b = b.relabel(&random_perm(rng, b.order()));
            let oracle = generator_enumeration_iso(a, &b).is_some();
            let mut runs = vec![solvable_iso(a, &b, IsoOptions::default()).unwrap()];
            pairs += 1;
            if b.order() == n {
                runs.push(solvable_iso(a, &b, raw).unwrap());
                raw_pairs += 1;
            }
            for out in runs {
                if out.witness.is_some() != oracle {
                    mismatches += 1;
                }
                if let Some(phi) = &out.witness {
                    w.record(a.is_isomorphism(&b, phi));
                }
                let c = out.counters;
                let series_cap = c.bases as f64 * series_bound(d.p2.order());
                let sequence_cap = c.series as f64 * q1.powi(k as i32);
                if c.bases > n as u64
                    || c.series as f64 > series_cap
                    || c.sequences as f64 > sequence_cap
                {
                    over_budget += 1;
                }
            }
        }
    }
    Outcome {
        pass: mismatches == 0 && over_budget == 0,
        detail: format!(
            "{} groups, {pairs} ordered pairs ({raw_pairs} also without prefilters), \
             {mismatches} verdict mismatches (tolerance 0), {over_budget} loop-budget violations (tolerance 0)",
            corpus.len()
        ),
    }
}

fn canonical_form_law(corpus: &Corpus, rng: &mut ChaCha8Rng, w: &mut Witnesses) -> Outcome {
    let mut forms = Vec::new();
    for (_, g) in corpus {
        let c = canon_group(g).unwrap();
        w.record(g.is_isomorphism(&c.form.to_group(), &c.psi));
        forms.push(c.form.to_text());
    }
    let mut law_failures = 0;
    for (i, (_, a)) in corpus.iter().enumerate() {
        for (j, (_, b)) in corpus.iter().enumerate() {
            let iso = generator_enumeration_iso(a, b).is_some();
            if (forms[i] == forms[j]) != iso {
                law_failures += 1;
            }
        }
    }
    let mut unstable = 0;
    for ((_, g), form) in corpus.iter().zip(&forms) {
        for _ in 0..RELABELINGS {
            let h = g.relabel(&random_perm(rng, g.order()));
            let c = canon_group(&h).unwrap();
            w.record(h.is_isomorphism(&c.form.to_group(), &c.psi));
            if c.form.to_text() != *form {
                unstable += 1;
            }
        }
    }
    Outcome {
        pass: law_failures == 0 && unstable == 0,
        detail: format!(
            "{} pairs, {law_failures} law failures (tolerance 0); {} relabelings, \
             {unstable} non-identical tables (tolerance 0)",
            corpus.len() * corpus.len(),
            corpus.len() * RELABELINGS
        ),
    }
}

/// Every augmented pair at the default threshold: each decomposition, each
/// series of the small part, and each shortest generating sequence of the
/// large part plus the greedy one.
fn augmented_pairs(g: &GroupTable) -> Vec<AugmentedPair> {
    let mut out = Vec::new();
    for d in all_alpha_decompositions(g, choose_alpha(g.order())).unwrap() {
        let k = min_generating_length(g, &d.p1);
        let mut seqs = enumerate_generating_sequences(g, &d.p1, k);
        let greedy = g.greedy_generators(&d.p1);
        if !seqs.contains(&greedy) {
            seqs.push(greedy);
        }
        for s2 in enumerate_composition_series(g, &d.p2) {
            for gens in &seqs {
                out.push(AugmentedPair {
                    p1: d.p1.clone(),
                    s2: s2.clone(),
                    gens: gens.clone(),
                });
            }
        }
    }
    out
}

fn round_trips(corpus: &Corpus, rng: &mut ChaCha8Rng, w: &mut Witnesses) -> Outcome {
    let (mut pairs, mut decode_failures, mut rebuild_failures) = (0, 0, 0);
    for (_, g) in corpus.iter().filter(|(_, g)| g.order() <= EXHAUSTIVE_ORDER) {
        for pair in augmented_pairs(g) {
            pairs += 1;
            let x = build_x(g, &pair).unwrap();
            let perm = random_perm(rng, x.graph.vertex_count());
            let a = x.graph.relabel(&perm);
            let Ok(dec) = decode_y(&a, x.ell, x.m) else {
                decode_failures += 1;
                continue;
            };
            let phi: Vec<usize> = x
                .elem_vertex
                .iter()
                .map(|&v| {
                    dec.elem_vertex
                        .binary_search(&perm[v])
                        .unwrap_or(usize::MAX)
                })
                .collect();
            if phi.contains(&usize::MAX)
                || !pair.is_pair_isomorphism(g, &dec.pair, &dec.table, &phi)
            {
                decode_failures += 1;
            }
            let rebuilt = build_x(&dec.table, &dec.pair).unwrap();
            match are_graphs_isomorphic(&rebuilt.graph, &a) {
                Some(map) => w.record(rebuilt.graph.is_isomorphism(&a, &map)),
                None => rebuild_failures += 1,
            }
        }
    }
    Outcome {
        pass: decode_failures == 0 && rebuild_failures == 0,
        detail: format!(
            "{pairs} augmented pairs of groups up to order {EXHAUSTIVE_ORDER}, encodings randomly relabeled; \
             {decode_failures} decode mismatches, {rebuild_failures} non-isomorphic rebuilds (tolerance 0)"
        ),
    }
}

fn graph_bounds(corpus: &Corpus) -> Outcome {
    let (mut graphs, mut violations, mut worst_ratio) = (0, 0, 0.0f64);
    for (_, g) in corpus {
        let n = g.order();
        for alpha in 2..=4 {
            for d in all_alpha_decompositions(g, alpha).unwrap() {
                let gens = g.greedy_generators(&d.p1);
                for s2 in enumerate_composition_series(g, &d.p2) {
                    let pair = AugmentedPair {
                        p1: d.p1.clone(),
                        s2,
                        gens: gens.clone(),
                    };
                    let x = build_x(g, &pair).unwrap();
                    graphs += 1;
                    let v = x.graph.vertex_count();
                    worst_ratio = worst_ratio.max(v as f64 / (n * n) as f64);
                    if x.graph.max_degree() > (alpha + 1).max(4) || v > 8 * n * n {
                        violations += 1;
                    }
                }
            }
        }
    }
    Outcome {
        pass: violations == 0,
        detail: format!(
            "{graphs} encodings for thresholds 2..=4, {violations} violations of degree <= max(alpha+1, 4) \
             or |V| <= 8n^2 (tolerance 0), largest |V|/n^2 = {worst_ratio:.2}"
        ),
    }
}

fn series_counts(corpus: &Corpus) -> Outcome {
    let mut mismatches = Vec::new();
    let mut compared = 0;
    let mut pinned = vec![
        ("Z2^2".to_string(), elementary_abelian(2, 2).unwrap(), 3),
        ("Z3^2".to_string(), elementary_abelian(3, 2).unwrap(), 4),
        ("Z5^2".to_string(), elementary_abelian(5, 2).unwrap(), 6),
        ("Z6".to_string(), cyclic(6).unwrap(), 2),
    ];
    for q in [4, 8, 9, 16, 25, 27, 32] {
        pinned.push((format!("Z{q}"), cyclic(q).unwrap(), 1));
    }
    for (name, g, expected) in &pinned {
        if enumerate_composition_series(g, &g.whole()).len() != *expected {
            mismatches.push(name.clone());
        }
    }
    for (name, g) in corpus.iter().filter(|(_, g)| g.order() <= EXHAUSTIVE_ORDER) {
        let lattice = all_subgroups(g);
        let mut tops: Vec<Subgroup> = vec![g.whole(), default_decomposition(g).p2];
        for (_, s) in sylow_basis(g).unwrap().entries {
            tops.push(s);
        }
        for top in tops {
            compared += 1;
            if enumerate_composition_series(g, &top).len()
                != lattice_series_count(g, &lattice, &top)
            {
                mismatches.push(format!("{name}[{}]", top.order()));
            }
        }
    }
    let mut over_bound = Vec::new();
    let mut chains_checked = 0;
    for (name, g) in corpus {
        for top in [g.whole(), default_decomposition(g).p2] {
            chains_checked += 1;
            let chains = for_each_subgroup_chain(g, &top, |_| {});
            if chains as f64 > series_bound(top.order()) {
                over_bound.push(name.clone());
            }
        }
    }
    Outcome {
        pass: mismatches.is_empty() && over_bound.is_empty(),
        detail: format!(
            "{} pinned counts and {compared} lattice comparisons, mismatches {mismatches:?}; \
             {chains_checked} raw chain counts, over bound {over_bound:?} (tolerance 0)",
            pinned.len()
        ),
    }
}

fn sylow_layer(corpus: &Corpus) -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    for (name, g) in corpus {
        match sylow_basis(g) {
            Ok(b) if b.is_valid(g) => {}
            _ => failures.push(format!("{name}: no valid basis")),
        }
        let bases = all_sylow_bases(g).unwrap();
        if bases.len() > g.order() || !bases.iter().all(|b| b.is_valid(g)) {
            failures.push(format!("{name}: basis list"));
        }
        if g.order() > SYLOW_ORDER {
            continue;
        }
        let mut ours: Vec<Vec<Subgroup>> = bases
            .iter()
            .map(|b| b.entries.iter().map(|(_, s)| s.clone()).collect())
            .collect();
        let mut brute = brute_force_sylow_systems(g, &all_subgroups(g));
        ours.sort();
        brute.sort();
        if ours != brute {
            failures.push(format!("{name}: differs from brute-force systems"));
        }
        let conjugate = bases.iter().all(|a| {
            bases
                .iter()
                .all(|b| (0..g.order()).any(|x| a.conjugate(g, x) == *b))
        });
        if !conjugate {
            failures.push(format!("{name}: not pairwise conjugate"));
        }
    }
    let non_solvable = [
        ("A5", alternating(5).unwrap()),
        ("S5", symmetric(5).unwrap()),
        ("SL(2,5)", special_linear2(5).unwrap()),
    ];
    for (name, g) in &non_solvable {
        if sylow_basis(g) != Err(Error::NotSolvable) {
            failures.push(format!("{name}: basis found"));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{} solvable groups, {} non-solvable rejected; failures {failures:?}",
            corpus.len(),
            non_solvable.len()
        ),
    }
}

/// Pair-level witnesses: each augmented pair of the smaller groups against
/// its image under a random relabeling, and against every other pair.
fn pair_witnesses(corpus: &Corpus, rng: &mut ChaCha8Rng, w: &mut Witnesses) -> usize {
    let mut missed = 0;
    for (_, g) in corpus.iter().filter(|(_, g)| g.order() <= 16) {
        let pairs = augmented_pairs(g);
        for pa in &pairs {
            let perm = random_perm(rng, g.order());
            let h = g.relabel(&perm);
            match augmented_pair_iso(g, pa, &h, &pa.map(&perm)).unwrap() {
                Some(phi) => w.record(pa.is_pair_isomorphism(g, &pa.map(&perm), &h, &phi)),
                None => missed += 1,
            }
            for pb in pairs.iter().filter(|pb| pb.p1 == pa.p1) {
                if let Some(phi) = augmented_pair_iso(g, pa, g, pb).unwrap() {
                    w.record(pa.is_pair_isomorphism(g, pb, g, &phi));
                }
            }
        }
    }
    missed
}

fn witness_integrity(corpus: &Corpus, rng: &mut ChaCha8Rng, w: &mut Witnesses) -> Outcome {
    let missed = pair_witnesses(corpus, rng, w);
    Outcome {
        pass: w.positives > 0 && w.positives == w.verified && missed == 0,
        detail: format!(
            "{} positive answers across all criteria, {} unverified (tolerance 0), \
             {missed} relabeled pairs not recognized",
            w.positives,
            w.positives - w.verified
        ),
    }
}

/// Canonical forms, encoding dumps and benchmark counters, as one string.
fn digest(corpus: &Corpus) -> String {
    let mut out = String::new();
    for (name, g) in corpus {
        out.push_str(name);
        out.push('\n');
        out.push_str(&canon_group(g).unwrap().form.to_text());
        if g.order() <= EXHAUSTIVE_ORDER {
            let d = default_decomposition(g);
            let pair = AugmentedPair {
                s2: first_composition_series(g, &d.p2),
                gens: g.greedy_generators(&d.p1),
                p1: d.p1,
            };
            let x = build_x(g, &pair).unwrap();
            out.push_str(&x.graph.dump());
            out.push_str(&canonize_colored_graph(&x.graph).dump());
        }
    }
    for mut row in run_bench(64).unwrap() {
        // Everything except the wall-clock column.
        row.micros = 0;
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

fn determinism(corpus: &Corpus) -> Outcome {
    let first = digest(corpus);
    let second = digest(corpus);
    let differing = first
        .lines()
        .zip(second.lines())
        .filter(|(a, b)| a != b)
        .count()
        + first.lines().count().abs_diff(second.lines().count());
    Outcome {
        pass: first == second,
        detail: format!(
            "two runs, {} bytes of canonical forms, dumps and counters each, {differing} differing lines (tolerance 0)",
            first.len()
        ),
    }
}

fn main() {
    let start = Instant::now();
    let corpus = corpus(64);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut w = Witnesses::default();

    let mut results = vec![
        (
            "oracle equivalence",
            oracle_equivalence(&corpus, &mut rng, &mut w),
        ),
        (
            "canonical-form law",
            canonical_form_law(&corpus, &mut rng, &mut w),
        ),
        ("round trips", round_trips(&corpus, &mut rng, &mut w)),
        ("graph bounds", graph_bounds(&corpus)),
        ("composition series", series_counts(&corpus)),
        ("sylow layer", sylow_layer(&corpus)),
    ];
    let integrity = witness_integrity(&corpus, &mut rng, &mut w);
    results.push(("witness integrity", integrity));
    results.push(("determinism", determinism(&corpus)));

    let elapsed = start.elapsed().as_secs_f64();
    let timely = elapsed <= TIME_LIMIT_SECS;
    results[0].1.pass &= timely;
    results[0].1.detail += &format!("; suite {elapsed:.1}s (limit {TIME_LIMIT_SECS:.0}s)");

    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict} {name}: {}", i + 1, outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

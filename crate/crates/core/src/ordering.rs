//! Shortlex word orderings of a subgroup relative to an ordered generating
//! sequence, and enumeration of such sequences.

use crate::error::{Error, Result};
use crate::group::{GroupTable, Subgroup};

/// Elements ordered by their shortlex-least words in a generating sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordOrder {
    /// `rank[x]` for members of the subgroup, `None` elsewhere.
    pub rank: Vec<Option<usize>>,
    /// Members listed by rank.
    pub by_rank: Vec<usize>,
    /// `word[x]` lists generator positions; empty for the identity.
    pub word: Vec<Vec<usize>>,
}

/// Breadth-first search of the Cayley graph of `(p, gens)` from the identity,
/// visiting the frontier in rank order and generators by position. Each
/// element is reached first along its shortlex-least word.
pub fn word_ranks(g: &GroupTable, p: &Subgroup, gens: &[usize]) -> Result<WordOrder> {
    let n = g.order();
    let mut rank = vec![None; n];
    let mut word = vec![Vec::new(); n];
    let mut by_rank = vec![g.identity()];
    rank[g.identity()] = Some(0);
    let mut head = 0;
    while head < by_rank.len() {
        let x = by_rank[head];
        head += 1;
        for (i, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            if rank[y].is_none() {
                rank[y] = Some(by_rank.len());
                let mut w = word[x].clone();
                w.push(i);
                word[y] = w;
                by_rank.push(y);
            }
        }
    }
    if by_rank.len() != p.order() || !by_rank.iter().all(|&x| p.contains(x)) {
        return Err(Error::NotGenerating);
    }
    Ok(WordOrder {
        rank,
        by_rank,
        word,
    })
}

/// Repeatedly appends the smallest member outside the span so far.
pub fn greedy_generating_sequence(g: &GroupTable, p: &Subgroup) -> Vec<usize> {
    g.greedy_generators(p)
}

pub fn is_irredundant(g: &GroupTable, gens: &[usize]) -> bool {
    (0..gens.len()).all(|i| !g.subgroup_closure(&gens[..i]).contains(gens[i]))
}

/// Visits every irredundant sequence of length exactly `k` generating `q`, in
/// lexicographic order of element indices. The visitor returns `false` to stop.
/// Returns whether the enumeration ran to completion.
pub fn for_each_generating_sequence(
    g: &GroupTable,
    q: &Subgroup,
    k: usize,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> bool {
    let mut seq = Vec::with_capacity(k);
    gen_dfs(g, q, k, &g.trivial_subgroup(), &mut seq, &mut visit)
}

fn gen_dfs(
    g: &GroupTable,
    q: &Subgroup,
    k: usize,
    span: &Subgroup,
    seq: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if seq.len() == k {
        return if span == q { visit(seq) } else { true };
    }
    if span == q {
        return true;
    }
    // Each remaining generator at least doubles the span.
    if span.order() << (k - seq.len()) > q.order() {
        return true;
    }
    for x in q.iter() {
        if span.contains(x) {
            continue;
        }
        seq.push(x);
        let next = g.subgroup_closure(seq);
        let go_on = gen_dfs(g, q, k, &next, seq, visit);
        seq.pop();
        if !go_on {
            return false;
        }
    }
    true
}

pub fn enumerate_generating_sequences(g: &GroupTable, q: &Subgroup, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_generating_sequence(g, q, k, |s| {
        out.push(s.to_vec());
        true
    });
    out
}

/// Length of the shortest generating sequence of `q`.
pub fn min_generating_length(g: &GroupTable, q: &Subgroup) -> usize {
    (0..)
        .find(|&k| !for_each_generating_sequence(g, q, k, |_| false))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cyclic, elementary_abelian, symmetric};
    use proptest::prelude::*;

    /// Shortlex-least word for every element by enumerating all words up to
    /// the given length.
    fn brute_force_words(
        g: &GroupTable,
        gens: &[usize],
        max_len: usize,
    ) -> Vec<Option<Vec<usize>>> {
        let mut best: Vec<Option<Vec<usize>>> = vec![None; g.order()];
        let mut layer: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..=max_len {
            for w in &layer {
                let x = w.iter().fold(g.identity(), |acc, &i| g.mul(acc, gens[i]));
                if best[x].is_none() {
                    best[x] = Some(w.clone());
                }
            }
            let mut next = Vec::new();
            for w in &layer {
                for i in 0..gens.len() {
                    let mut v = w.clone();
                    v.push(i);
                    next.push(v);
                }
            }
            layer = next;
        }
        best
    }

    #[test]
    fn cyclic_ranks() {
        let z4 = cyclic(4).unwrap();
        let w = word_ranks(&z4, &z4.whole(), &[1]).unwrap();
        assert_eq!(w.by_rank, vec![0, 1, 2, 3]);
        assert_eq!(w.word[3], vec![0, 0, 0]);
    }

    #[test]
    fn klein_ranks() {
        let v = elementary_abelian(2, 2).unwrap();
        let w = word_ranks(&v, &v.whole(), &[1, 2]).unwrap();
        assert_eq!(w.by_rank, vec![0, 1, 2, 3]);
    }

    #[test]
    fn s3_ranks_match_brute_force() {
        let g = symmetric(3).unwrap();
        let r = (0..6).find(|&x| g.element_order(x) == 3).unwrap();
        let s = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        let w = word_ranks(&g, &g.whole(), &[r, s]).unwrap();
        let expect = vec![g.identity(), r, s, g.mul(r, r), g.mul(r, s), g.mul(s, r)];
        assert_eq!(w.by_rank, expect);
        let brute = brute_force_words(&g, &[r, s], 4);
        for (b, word) in brute.iter().zip(&w.word) {
            assert_eq!(b.as_ref(), Some(word));
        }
    }

    #[test]
    fn non_generating_is_an_error() {
        let z4 = cyclic(4).unwrap();
        assert_eq!(
            word_ranks(&z4, &z4.whole(), &[2]),
            Err(Error::NotGenerating)
        );
    }

    #[test]
    fn greedy_examples() {
        let z6 = cyclic(6).unwrap();
        assert!(greedy_generating_sequence(&z6, &z6.trivial_subgroup()).is_empty());
        assert_eq!(greedy_generating_sequence(&z6, &z6.whole()), vec![1]);
        let v = elementary_abelian(2, 2).unwrap();
        assert_eq!(greedy_generating_sequence(&v, &v.whole()), vec![1, 2]);
    }

    #[test]
    fn sequence_enumeration_examples() {
        let t = cyclic(1).unwrap();
        assert_eq!(
            enumerate_generating_sequences(&t, &t.whole(), 0),
            vec![Vec::<usize>::new()]
        );
        let z3 = cyclic(3).unwrap();
        assert_eq!(
            enumerate_generating_sequences(&z3, &z3.whole(), 1),
            vec![vec![1], vec![2]]
        );
        let v = elementary_abelian(2, 2).unwrap();
        let seqs = enumerate_generating_sequences(&v, &v.whole(), 2);
        let mut brute = Vec::new();
        for a in 1..4 {
            for b in 1..4 {
                if a != b {
                    brute.push(vec![a, b]);
                }
            }
        }
        assert_eq!(seqs, brute);
        assert_eq!(min_generating_length(&v, &v.whole()), 2);
        assert_eq!(min_generating_length(&t, &t.whole()), 0);
    }

    #[test]
    fn enumerated_sequences_are_irredundant_and_generate() {
        let g = symmetric(4).unwrap();
        for s in enumerate_generating_sequences(&g, &g.whole(), 2) {
            assert!(is_irredundant(&g, &s));
            assert_eq!(g.subgroup_closure(&s), g.whole());
        }
    }

    proptest! {
        /// Ranks are preserved by relabeling the group and mapping the sequence.
        #[test]
        fn ranks_are_equivariant(perm in Just((0..24).collect::<Vec<usize>>()).prop_shuffle(), pick in 0usize..200) {
            let g = symmetric(4).unwrap();
            let seqs = enumerate_generating_sequences(&g, &g.whole(), 2);
            let gens = &seqs[pick % seqs.len()];
            let h = g.relabel(&perm);
            let mapped: Vec<usize> = gens.iter().map(|&x| perm[x]).collect();
            let wg = word_ranks(&g, &g.whole(), gens).unwrap();
            let wh = word_ranks(&h, &h.whole(), &mapped).unwrap();
            for (x, &px) in perm.iter().enumerate() {
                prop_assert_eq!(wg.rank[x], wh.rank[px]);
            }
        }
    }
}

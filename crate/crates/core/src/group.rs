//! Cayley-table groups and the subgroup machinery everything else builds on.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::bitset::Bitset;
use crate::error::{Error, Result};

/// A finite group given by its full multiplication table.
///
/// Elements are the indices `0..n`. The identity is whatever element the
/// table says it is; nothing assumes it sits at index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

/// A subgroup of some ambient [`GroupTable`], stored as a membership bitset.
///
/// The ambient group is not stored; operations take it as an argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Bitset,
}

/// `n = p1^e1 * ... * pl^el` with primes increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFactorization(pub Vec<(usize, u32)>);

impl PrimeFactorization {
    pub fn primes(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn smallest_prime(&self) -> Option<usize> {
        self.0.first().map(|&(p, _)| p)
    }

    /// `p^e` where `p^e` exactly divides the factored number.
    pub fn prime_power(&self, p: usize) -> Option<usize> {
        self.0
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(q, e)| q.pow(e))
    }

    pub fn product(&self) -> usize {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

pub fn factorize(mut n: usize) -> PrimeFactorization {
    assert!(n >= 1, "factorize needs a positive integer");
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    PrimeFactorization(out)
}

impl GroupTable {
    /// Checks the group axioms on a raw table of 0-based indices.
    pub fn validate(raw: &[Vec<usize>]) -> Result<Self> {
        let n = raw.len();
        if n == 0 {
            return Err(Error::Shape("empty table".into()));
        }
        for (i, row) in raw.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(Error::Shape(format!("entry {v} in row {i} out of range")));
            }
        }
        let table: Vec<usize> = raw.iter().flatten().copied().collect();
        Self::validate_flat(n, table)
    }

    pub fn validate_flat(n: usize, table: Vec<usize>) -> Result<Self> {
        if n == 0 || table.len() != n * n {
            return Err(Error::Shape("table is not n x n".into()));
        }
        if table.iter().any(|&v| v >= n) {
            return Err(Error::Shape("entry out of range".into()));
        }
        let at = |a: usize, b: usize| table[a * n + b];

        for i in 0..n {
            let mut seen = Bitset::new(n);
            for j in 0..n {
                if !seen.insert(at(i, j)) {
                    return Err(Error::NotLatinSquare {
                        line: "row",
                        index: i,
                        value: at(i, j),
                    });
                }
            }
        }
        for j in 0..n {
            let mut seen = Bitset::new(n);
            for i in 0..n {
                if !seen.insert(at(i, j)) {
                    return Err(Error::NotLatinSquare {
                        line: "column",
                        index: j,
                        value: at(i, j),
                    });
                }
            }
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(Error::NoIdentity)?;

        let mut inverse = vec![0; n];
        for (x, inv) in inverse.iter_mut().enumerate() {
            // Latin rows give a unique right inverse; it must also be a left one.
            let y = (0..n).find(|&y| at(x, y) == identity).unwrap();
            if at(y, x) != identity {
                return Err(Error::MissingInverse(x));
            }
            *inv = y;
        }

        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NonAssociative(a, b, c));
                    }
                }
            }
        }

        Ok(GroupTable {
            n,
            table,
            identity,
            inverse,
        })
    }

    /// Builds and validates a table from a product function.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(f(a, b));
            }
        }
        Self::validate_flat(n, table)
    }

    /// Parses the `.cayley` text format (1-based entries).
    pub fn parse_cayley(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (ln, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let n: usize = first.trim().parse().map_err(|_| Error::Parse {
            line: ln + 1,
            msg: format!("expected element count, found {first:?}"),
        })?;
        let mut raw = Vec::with_capacity(n);
        for (ln, line) in lines {
            let mut row = Vec::with_capacity(n);
            for tok in line.split_whitespace() {
                let v: usize = tok.parse().map_err(|_| Error::Parse {
                    line: ln + 1,
                    msg: format!("bad entry {tok:?}"),
                })?;
                if v == 0 || v > n {
                    return Err(Error::Parse {
                        line: ln + 1,
                        msg: format!("entry {v} outside 1..={n}"),
                    });
                }
                row.push(v - 1);
            }
            raw.push(row);
        }
        if raw.len() != n {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected {n} rows, found {}", raw.len()),
            });
        }
        Self::validate(&raw)
    }

    pub fn to_cayley(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for a in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|b| (self.mul(a, b) + 1).to_string())
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        (0..self.n).map(|x| self.element_order(x)).collect()
    }

    /// Sorted multiset of element orders; an isomorphism invariant.
    pub fn order_profile(&self, members: impl Iterator<Item = usize>) -> Vec<usize> {
        let mut v: Vec<usize> = members.map(|x| self.element_order(x)).collect();
        v.sort_unstable();
        v
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// Table of the same group with element `x` renamed to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> GroupTable {
        let n = self.n;
        let mut inv_perm = vec![0; n];
        for (x, &y) in perm.iter().enumerate() {
            inv_perm[y] = x;
        }
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = perm[self.mul(inv_perm[a], inv_perm[b])];
            }
        }
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[perm[x]] = perm[self.inv(x)];
        }
        GroupTable {
            n,
            table,
            identity: perm[self.identity],
            inverse,
        }
    }

    /// Whether `phi` (indexed by elements of `self`) is an isomorphism onto `other`.
    pub fn is_isomorphism(&self, other: &GroupTable, phi: &[usize]) -> bool {
        if phi.len() != self.n || other.n != self.n {
            return false;
        }
        let mut hit = Bitset::new(self.n);
        if !phi.iter().all(|&y| y < other.n && hit.insert(y)) {
            return false;
        }
        (0..self.n).all(|a| (0..self.n).all(|b| phi[self.mul(a, b)] == other.mul(phi[a], phi[b])))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            members: Bitset::from_indices(self.n, [self.identity]),
        }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: Bitset::full(self.n),
        }
    }

    /// Smallest subgroup containing `seed` (worklist closure).
    pub fn subgroup_closure(&self, seed: &[usize]) -> Subgroup {
        let mut members = Bitset::new(self.n);
        members.insert(self.identity);
        let gens: Vec<usize> = seed
            .iter()
            .copied()
            .filter(|&x| x != self.identity)
            .collect();
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if members.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup { members }
    }

    /// Interprets a bitset as a subgroup after checking closure.
    pub fn subgroup_from_set(&self, members: Bitset) -> Option<Subgroup> {
        if !members.contains(self.identity) {
            return None;
        }
        let items = members.to_vec();
        for &a in &items {
            for &b in &items {
                if !members.contains(self.mul(a, b)) {
                    return None;
                }
            }
        }
        Some(Subgroup { members })
    }

    /// Greedy generators: repeatedly add the smallest member outside the span so far.
    pub fn greedy_generators(&self, h: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.trivial_subgroup();
        while span.order() < h.order() {
            let x = h.iter().find(|&x| !span.contains(x)).unwrap();
            gens.push(x);
            span = self.subgroup_closure(&gens);
        }
        gens
    }

    /// Whether `h` is normal in `k`. Errors if `h` is not inside `k`.
    pub fn is_normal(&self, h: &Subgroup, k: &Subgroup) -> Result<bool> {
        if !h.is_subgroup_of(k) {
            return Err(Error::NotNested);
        }
        let hg = self.greedy_generators(h);
        let kg = self.greedy_generators(k);
        Ok(kg
            .iter()
            .all(|&x| hg.iter().all(|&y| h.contains(self.conj(x, y)))))
    }

    /// `{ a*b : a in A, b in B }`.
    pub fn product_set(&self, a: &Subgroup, b: &Subgroup) -> Bitset {
        let mut out = Bitset::new(self.n);
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    pub fn permutes(&self, a: &Subgroup, b: &Subgroup) -> bool {
        self.product_set(a, b) == self.product_set(b, a)
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, g: usize) -> Subgroup {
        Subgroup {
            members: Bitset::from_indices(self.n, h.iter().map(|x| self.conj(g, x))),
        }
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let hg = self.greedy_generators(h);
        let members = Bitset::from_indices(
            self.n,
            (0..self.n).filter(|&g| hg.iter().all(|&y| h.contains(self.conj(g, y)))),
        );
        Subgroup { members }
    }

    /// `G = D0 >= D1 >= ...` until the commutator subgroup stops shrinking.
    pub fn derived_series(&self) -> Vec<Subgroup> {
        let mut series = vec![self.whole()];
        loop {
            let d = series.last().unwrap();
            let items = d.to_vec();
            let mut comms = Bitset::new(self.n);
            for &a in &items {
                for &b in &items {
                    comms.insert(self.commutator(a, b));
                }
            }
            let next = self.subgroup_closure(&comms.to_vec());
            if &next == d {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().order() == 1
    }
}

impl Subgroup {
    pub fn members(&self) -> &Bitset {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members.to_vec()
    }

    /// Smallest member index.
    pub fn first_member(&self) -> usize {
        self.members
            .first()
            .expect("subgroups contain the identity")
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            members: self.members.intersection(&other.members),
        }
    }

    /// Image under an element map (an automorphism or isomorphism).
    pub fn map(&self, phi: &[usize]) -> Subgroup {
        Subgroup {
            members: self.members.map(phi),
        }
    }

    /// 1-based member list for display.
    pub fn display_list(&self) -> String {
        let v: Vec<String> = self.iter().map(|x| (x + 1).to_string()).collect();
        v.join(" ")
    }
}

//! Encoding an augmented composition pair as a colored tree-plus-gadget graph,
//! and decoding such graphs back into groups.
//!
//! The graph is `T ⊙ T ⊙ M` where `T` is the word-order tree of `P1` with a
//! coset tree of the composition series hung below each leaf, and `M` is a
//! three-leaf star. The leaves of the first copy of `T` are the group
//! elements; the leaf reached by `(x, y)` carries a gadget whose left, right
//! and equals children are joined by two cross edges that spell out `x*y`.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::group::{GroupTable, Subgroup};
use crate::ordering::word_ranks;
use crate::series::CompositionSeries;

pub const ROOT: usize = 0;
pub const INTERNAL: usize = 1;
pub const SECOND_IDENTITY: usize = 2;
pub const LEFT: usize = 3;
pub const RIGHT: usize = 4;
pub const EQUALS: usize = 5;
/// Leaf of rank `k` in the word-order tree gets color `RANK_BASE + k`.
pub const RANK_BASE: usize = 6;

/// `(P1, S2, g)`: a large-prime subgroup, a composition series of its
/// complement and an ordered generating sequence of `P1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AugmentedPair {
    pub p1: Subgroup,
    pub s2: CompositionSeries,
    pub gens: Vec<usize>,
}

impl AugmentedPair {
    pub fn map(&self, phi: &[usize]) -> AugmentedPair {
        AugmentedPair {
            p1: self.p1.map(phi),
            s2: self.s2.map(phi),
            gens: self.gens.iter().map(|&x| phi[x]).collect(),
        }
    }

    /// Whether `phi: g -> h` is a group isomorphism carrying this pair onto `other`.
    pub fn is_pair_isomorphism(
        &self,
        g: &GroupTable,
        other: &AugmentedPair,
        h: &GroupTable,
        phi: &[usize],
    ) -> bool {
        g.is_isomorphism(h, phi) && self.map(phi) == *other
    }
}

/// Node payloads, concatenated along leaf products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Internal { level: usize, idx: usize },
    Coset { level: usize, min: usize },
    Elem(usize),
    Gadget(usize),
}

/// Rooted tree with node 0 as root and leaves listed in their fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    pub parent: Vec<Option<usize>>,
    pub tags: Vec<Vec<Tag>>,
    pub colors: Vec<usize>,
    pub leaves: Vec<usize>,
}

impl RootedTree {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn height(&self) -> usize {
        let mut h = 0;
        let mut v = *self.leaves.first().unwrap();
        while let Some(p) = self.parent[v] {
            v = p;
            h += 1;
        }
        h
    }
}

/// Balanced binary tree over `P1` whose leaves are the elements in word order,
/// each leaf colored by its rank. Built top down so every leaf has the same
/// depth; a single element still gets its own parent.
pub fn build_t_p1(g: &GroupTable, p1: &Subgroup, gens: &[usize]) -> Result<RootedTree> {
    let order = word_ranks(g, p1, gens)?;
    let a = p1.order();
    let mut sizes = vec![a];
    while *sizes.last().unwrap() > 1 {
        let s = *sizes.last().unwrap();
        sizes.push(s.div_ceil(2));
    }
    if a == 1 {
        sizes.push(1);
    }
    sizes.reverse();
    let mut offsets = vec![0];
    for s in &sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let total = *offsets.last().unwrap();
    let last = sizes.len() - 1;
    let mut tree = RootedTree {
        parent: vec![None; total],
        tags: vec![Vec::new(); total],
        colors: vec![INTERNAL; total],
        leaves: Vec::with_capacity(a),
    };
    for (level, &size) in sizes.iter().enumerate() {
        for j in 0..size {
            let id = offsets[level] + j;
            if level > 0 {
                tree.parent[id] = Some(offsets[level - 1] + j / 2);
            }
            if level == last {
                tree.tags[id] = vec![Tag::Elem(order.by_rank[j])];
                tree.colors[id] = RANK_BASE + j;
                tree.leaves.push(id);
            } else {
                tree.tags[id] = vec![Tag::Internal { level, idx: j }];
            }
        }
    }
    Ok(tree)
}

/// Coset tree of a composition series: the root is `P2`, the children of a
/// coset of `P2,i+1` are the cosets of `P2,i` inside it ordered by least
/// element, and the leaves are the elements of `P2`.
pub fn build_t_s2(g: &GroupTable, s2: &CompositionSeries) -> RootedTree {
    let m = s2.len();
    let top = s2.top();
    let root_tag = if m == 0 {
        Tag::Elem(g.identity())
    } else {
        Tag::Coset {
            level: m,
            min: top.first_member(),
        }
    };
    let mut tree = RootedTree {
        parent: vec![None],
        tags: vec![vec![root_tag]],
        colors: vec![INTERNAL],
        leaves: Vec::new(),
    };
    let mut level_nodes: Vec<(usize, Vec<usize>)> = vec![(0, top.to_vec())];
    for i in (0..m).rev() {
        let sub = s2.chain[i].to_vec();
        let mut next = Vec::new();
        for (id, members) in &level_nodes {
            let mut covered = crate::bitset::Bitset::new(g.order());
            for &x in members {
                if covered.contains(x) {
                    continue;
                }
                let coset: Vec<usize> = sub.iter().map(|&h| g.mul(x, h)).collect();
                for &y in &coset {
                    covered.insert(y);
                }
                let mut coset = coset;
                coset.sort_unstable();
                let child = tree.parent.len();
                tree.parent.push(Some(*id));
                tree.tags.push(vec![if i == 0 {
                    Tag::Elem(x)
                } else {
                    Tag::Coset { level: i, min: x }
                }]);
                tree.colors.push(INTERNAL);
                next.push((child, coset));
            }
        }
        level_nodes = next;
    }
    tree.leaves = level_nodes.into_iter().map(|(id, _)| id).collect();
    tree
}

/// `t1 ⊙ t2`: every leaf of `t1` becomes the root of a fresh copy of `t2`.
///
/// Nodes of `t1` keep their ids; the copy below leaf number `i` occupies ids
/// `|t1| + i*(|t2|-1) ..`, in the order of `t2`'s non-root nodes. Copied nodes
/// carry the leaf's tags followed by their own and keep their colors.
pub fn leaf_product(t1: &RootedTree, t2: &RootedTree) -> RootedTree {
    if t2.len() == 1 {
        return t1.clone();
    }
    let block = t2.len() - 1;
    let mut out = RootedTree {
        parent: t1.parent.clone(),
        tags: t1.tags.clone(),
        colors: t1.colors.clone(),
        leaves: Vec::with_capacity(t1.leaves.len() * t2.leaves.len()),
    };
    for (i, &leaf) in t1.leaves.iter().enumerate() {
        let base = t1.len() + i * block;
        for y in 1..t2.len() {
            let p = t2.parent[y].unwrap();
            out.parent
                .push(Some(if p == 0 { leaf } else { base + p - 1 }));
            let mut tag = t1.tags[leaf].clone();
            tag.extend_from_slice(&t2.tags[y]);
            out.tags.push(tag);
            out.colors.push(t2.colors[y]);
        }
        out.leaves.extend(t2.leaves.iter().map(|&y| base + y - 1));
    }
    out
}

/// The star with left, right and equals leaves.
pub fn gadget_tree() -> RootedTree {
    RootedTree {
        parent: vec![None, Some(0), Some(0), Some(0)],
        tags: vec![
            vec![],
            vec![Tag::Gadget(0)],
            vec![Tag::Gadget(1)],
            vec![Tag::Gadget(2)],
        ],
        colors: vec![INTERNAL, LEFT, RIGHT, EQUALS],
        leaves: vec![1, 2, 3],
    }
}

/// An encoded pair together with the bookkeeping needed to read it back.
#[derive(Clone, Debug)]
pub struct XGraph {
    pub graph: ColoredGraph,
    /// Height of the word-order tree.
    pub ell: usize,
    /// Length of the composition series.
    pub m: usize,
    /// Vertex standing for each group element.
    pub elem_vertex: Vec<usize>,
    pub tags: Vec<Vec<Tag>>,
}

impl XGraph {
    pub fn tree_edge_count(&self) -> usize {
        self.graph.vertex_count() - 1
    }
}

pub fn build_x(g: &GroupTable, pair: &AugmentedPair) -> Result<XGraph> {
    let n = g.order();
    let p2 = pair.s2.top();
    if pair.p1.order() * p2.order() != n {
        return Err(Error::ProductMismatch(0));
    }
    let t1 = build_t_p1(g, &pair.p1, &pair.gens)?;
    let t2 = build_t_s2(g, &pair.s2);
    let ell = t1.height();
    let m = pair.s2.len();
    let by_rank: Vec<usize> = t1.tags[t1.leaves[0]..]
        .iter()
        .map(|t| match t[0] {
            Tag::Elem(x) => x,
            _ => unreachable!(),
        })
        .collect();
    let p2_leaves: Vec<usize> = if m == 0 {
        vec![g.identity()]
    } else {
        t2.leaves
            .iter()
            .map(|&v| match t2.tags[v][0] {
                Tag::Elem(x) => x,
                _ => unreachable!(),
            })
            .collect()
    };

    // Leaf i of the pair tree is rank i / |P2| times leaf i % |P2| of the coset tree.
    let mut leaf_of_elem = vec![usize::MAX; n];
    for (r, &x1) in by_rank.iter().enumerate() {
        for (s, &x2) in p2_leaves.iter().enumerate() {
            let x = g.mul(x1, x2);
            if leaf_of_elem[x] != usize::MAX {
                return Err(Error::ProductMismatch(x));
            }
            leaf_of_elem[x] = r * p2_leaves.len() + s;
        }
    }

    let tpair = leaf_product(&t1, &t2);
    let tpp = leaf_product(&tpair, &tpair);
    let full = leaf_product(&tpp, &gadget_tree());
    let big_l = tpair.leaves.len();
    debug_assert_eq!(big_l, n);

    let mut colors = full.colors.clone();
    colors[0] = ROOT;
    if m > 0 {
        for &x1 in &by_rank {
            colors[tpair.leaves[leaf_of_elem[x1]]] = SECOND_IDENTITY;
        }
    }
    let mut graph = ColoredGraph::new(colors, 0);
    for (v, p) in full.parent.iter().enumerate() {
        if let Some(p) = *p {
            graph.add_edge(p, v);
        }
    }
    let gadget = |x: usize, y: usize, kind: usize| {
        tpp.len() + (leaf_of_elem[x] * big_l + leaf_of_elem[y]) * 3 + kind
    };
    for x in 0..n {
        for y in 0..n {
            graph.add_edge(gadget(x, y, 0), gadget(y, x, 1));
            graph.add_edge(gadget(y, x, 1), gadget(g.mul(x, y), y, 2));
        }
    }
    let elem_vertex = (0..n).map(|x| tpair.leaves[leaf_of_elem[x]]).collect();
    Ok(XGraph {
        graph,
        ell,
        m,
        elem_vertex,
        tags: full.tags,
    })
}

/// The graph map induced by a pair isomorphism `phi: g -> h`, checked to be a
/// colored-graph isomorphism.
pub fn apply_x_to_iso(
    g: &GroupTable,
    pa: &AugmentedPair,
    xa: &XGraph,
    h: &GroupTable,
    pb: &AugmentedPair,
    xb: &XGraph,
    phi: &[usize],
) -> Result<Vec<usize>> {
    if !g.is_isomorphism(h, phi) {
        return Err(Error::NotPairIso("not a group isomorphism".into()));
    }
    if pa.p1.map(phi) != pb.p1 {
        return Err(Error::NotPairIso(
            "large-prime parts do not correspond".into(),
        ));
    }
    if pa.s2.map(phi) != pb.s2 {
        return Err(Error::NotPairIso(
            "composition series do not correspond".into(),
        ));
    }
    if pa.gens.iter().map(|&x| phi[x]).ne(pb.gens.iter().copied()) {
        return Err(Error::NotPairIso(
            "generating sequences do not correspond".into(),
        ));
    }
    let index: HashMap<&[Tag], usize> = xb
        .tags
        .iter()
        .enumerate()
        .map(|(v, t)| (t.as_slice(), v))
        .collect();
    let map_tag = |t: &Tag| match *t {
        Tag::Elem(x) => Tag::Elem(phi[x]),
        Tag::Coset { level, min } => {
            let y = phi[min];
            let image = pb.s2.chain[level]
                .iter()
                .map(|k| h.mul(y, k))
                .min()
                .unwrap();
            Tag::Coset { level, min: image }
        }
        other => other,
    };
    let mut map = Vec::with_capacity(xa.tags.len());
    for tags in &xa.tags {
        let image: Vec<Tag> = tags.iter().map(map_tag).collect();
        let v = index
            .get(image.as_slice())
            .ok_or_else(|| Error::WitnessVerificationFailed("missing image node".into()))?;
        map.push(*v);
    }
    if !xa.graph.is_isomorphism(&xb.graph, &map) {
        return Err(Error::WitnessVerificationFailed(
            "induced map does not preserve the encoding".into(),
        ));
    }
    Ok(map)
}

/// What can be read back from an encoding: a group on `0..n` (elements are
/// numbered by vertex index), the large-prime subgroup, the composition
/// series bottom up, and the generating sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedPair {
    pub table: GroupTable,
    pub pair: AugmentedPair,
    /// Vertex of each decoded element.
    pub elem_vertex: Vec<usize>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedEncoding(msg.into())
}

fn is_gadget(c: usize) -> bool {
    (LEFT..=EQUALS).contains(&c)
}

/// Reads a group and augmented pair back out of an encoding, using only the
/// graph structure and colors.
pub fn decode_y(a: &ColoredGraph, ell: usize, m: usize) -> Result<DecodedPair> {
    let nv = a.vertex_count();
    let roots: Vec<usize> = (0..nv).filter(|&v| a.colors[v] == ROOT).collect();
    let &[root] = roots.as_slice() else {
        return Err(malformed("root color must appear exactly once"));
    };

    // Tree structure: every edge except the cross edges between gadget leaves.
    let mut depth = vec![usize::MAX; nv];
    let mut parent = vec![usize::MAX; nv];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in &a.adj[v] {
            if is_gadget(a.colors[v]) && is_gadget(a.colors[w]) {
                continue;
            }
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                queue.push_back(w);
            } else if w != parent[v] {
                return Err(malformed("tree part has a cycle"));
            }
        }
    }
    if depth.contains(&usize::MAX) {
        return Err(malformed("tree part is disconnected"));
    }
    let ancestor = |mut v: usize, d: usize| {
        while depth[v] > d {
            v = parent[v];
        }
        v
    };

    let d = ell + m;
    let elem_vertex: Vec<usize> = (0..nv).filter(|&v| depth[v] == d).collect();
    let n = elem_vertex.len();
    let mut label = vec![usize::MAX; nv];
    for (i, &v) in elem_vertex.iter().enumerate() {
        label[v] = i;
    }
    let leaves: Vec<usize> = (0..nv).filter(|&v| depth[v] == 2 * d).collect();
    if n == 0 || leaves.len() != n * n {
        return Err(malformed("wrong number of pair leaves"));
    }
    let first = |v: usize| label[ancestor(v, d)];

    let child_of_color = |v: usize, color: usize| -> Result<usize> {
        let found: Vec<usize> = a.adj[v]
            .iter()
            .copied()
            .filter(|&w| parent[w] == v && a.colors[w] == color)
            .collect();
        match found.as_slice() {
            &[w] => Ok(w),
            _ => Err(malformed(format!(
                "vertex {v} lacks a unique gadget child of color {color}"
            ))),
        }
    };
    let cross = |v: usize| -> Vec<usize> {
        a.adj[v]
            .iter()
            .copied()
            .filter(|&w| is_gadget(a.colors[w]) && w != parent[v])
            .collect()
    };

    // Second coordinate of a pair leaf: follow left -> right, whose leaf is (y, x).
    let mut second = vec![usize::MAX; nv];
    let mut right_partner = vec![usize::MAX; nv];
    for &v in &leaves {
        let l = child_of_color(v, LEFT)?;
        let r = match cross(l).as_slice() {
            &[r] if a.colors[r] == RIGHT => r,
            _ => {
                return Err(malformed(format!(
                    "left node {l} has no unique right partner"
                )))
            }
        };
        second[v] = first(parent[r]);
        right_partner[v] = r;
    }

    let mut table = vec![usize::MAX; n * n];
    for &v in &leaves {
        let (x, y) = (first(v), second[v]);
        if table[x * n + y] != usize::MAX {
            return Err(malformed(format!("pair ({x}, {y}) encoded twice")));
        }
        let r = right_partner[v];
        let w = parent[r];
        if second[w] != x {
            return Err(malformed(format!(
                "right node {r} hangs below the wrong pair"
            )));
        }
        let e = match cross(r)
            .iter()
            .copied()
            .filter(|&u| a.colors[u] == EQUALS)
            .collect::<Vec<_>>()
            .as_slice()
        {
            &[e] => e,
            _ => {
                return Err(malformed(format!(
                    "right node {r} has no unique equals partner"
                )))
            }
        };
        if cross(r).len() != 2 {
            return Err(malformed(format!(
                "right node {r} has the wrong number of cross edges"
            )));
        }
        let u = parent[e];
        if second[u] != y {
            return Err(malformed(format!(
                "equals node {e} hangs below the wrong pair"
            )));
        }
        table[x * n + y] = first(u);
    }
    let table = GroupTable::validate_flat(n, table)
        .map_err(|e| malformed(format!("decoded table is not a group: {e}")))?;

    let p1_set = if m > 0 {
        crate::bitset::Bitset::from_indices(
            n,
            (0..n).filter(|&i| a.colors[elem_vertex[i]] == SECOND_IDENTITY),
        )
    } else {
        crate::bitset::Bitset::full(n)
    };
    let p1 = table
        .subgroup_from_set(p1_set)
        .ok_or_else(|| malformed("second-identity nodes do not form a subgroup"))?;

    let e_vertex = elem_vertex[table.identity()];
    let mut chain = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let top = ancestor(e_vertex, d - i);
        let set = crate::bitset::Bitset::from_indices(
            n,
            (0..n).filter(|&j| ancestor(elem_vertex[j], d - i) == top),
        );
        chain.push(
            table
                .subgroup_from_set(set)
                .ok_or_else(|| malformed(format!("series level {i} is not a subgroup")))?,
        );
    }
    let s2 = CompositionSeries { chain };

    let mut by_rank = vec![usize::MAX; p1.order()];
    for x in p1.iter() {
        let c = a.colors[ancestor(elem_vertex[x], ell)];
        let r = c
            .checked_sub(RANK_BASE)
            .filter(|&r| r < by_rank.len() && by_rank[r] == usize::MAX)
            .ok_or_else(|| malformed("rank colors are not a permutation"))?;
        by_rank[r] = x;
    }
    let k = (0..by_rank.len())
        .find(|&k| table.subgroup_closure(&by_rank[1..=k]) == p1)
        .unwrap();
    let gens = by_rank[1..=k].to_vec();
    let order =
        word_ranks(&table, &p1, &gens).map_err(|_| malformed("generators do not span P1"))?;
    if order.by_rank != by_rank {
        return Err(malformed("rank colors disagree with the word order"));
    }

    Ok(DecodedPair {
        table,
        pair: AugmentedPair { p1, s2, gens },
        elem_vertex,
    })
}

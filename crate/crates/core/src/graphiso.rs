//! Canonical labeling of vertex-colored graphs by individualization and
//! refinement, with automorphism pruning.
//!
//! Search tree nodes are ordered partitions of the vertex set. Each node is
//! refined to an equitable partition; its children individualize the vertices
//! of the first smallest non-singleton cell. Leaves are discrete partitions,
//! ranked by the sequence of refinement traces along their path and then by
//! the relabeled edge list. The least leaf gives the canonical labeling.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::graph::ColoredGraph;

/// A graph relabeled into canonical position, with the labeling used.
#[derive(Clone, Debug)]
pub struct CanonicalGraph {
    pub graph: ColoredGraph,
    /// `labeling[v]` is the canonical index of original vertex `v`.
    pub labeling: Vec<usize>,
    /// Search tree nodes visited.
    pub nodes: u64,
}

impl CanonicalGraph {
    /// Colors in canonical order, root index and sorted edges; equal for two
    /// graphs exactly when they are isomorphic.
    pub fn certificate(&self) -> (Vec<usize>, usize, Vec<(usize, usize)>) {
        (
            self.graph.colors.clone(),
            self.graph.root,
            self.graph.edges(),
        )
    }

    pub fn dump(&self) -> String {
        self.graph.dump()
    }
}

impl PartialEq for CanonicalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl Eq for CanonicalGraph {}

/// Adjacency in compressed form.
struct Csr {
    start: Vec<u32>,
    nbrs: Vec<u32>,
}

impl Csr {
    fn new(g: &ColoredGraph) -> Self {
        let mut start = Vec::with_capacity(g.vertex_count() + 1);
        let mut nbrs = Vec::new();
        start.push(0);
        for ns in &g.adj {
            nbrs.extend(ns.iter().map(|&v| v as u32));
            start.push(nbrs.len() as u32);
        }
        Csr { start, nbrs }
    }

    #[inline]
    fn nbrs(&self, v: u32) -> &[u32] {
        &self.nbrs[self.start[v as usize] as usize..self.start[v as usize + 1] as usize]
    }
}

/// Ordered partition: `elems` lists vertices cell by cell; `cell[v]` is the
/// start position of the cell holding `v`; `len[s]` is the size of the cell
/// starting at position `s`.
#[derive(Clone)]
struct Partition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    cell: Vec<u32>,
    len: Vec<u32>,
    cells: usize,
}

/// Deterministic word mixing for refinement traces.
#[inline]
fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x
        .wrapping_add(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(h << 6)
        .wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Scratch {
    count: Vec<u32>,
    cell_seen: Vec<bool>,
    in_queue: Vec<bool>,
}

impl Partition {
    /// Cells by color; with `split_root` the root is split off ahead of its
    /// color class.
    fn initial(g: &ColoredGraph, split_root: bool) -> Self {
        let colors: Vec<(usize, bool)> = (0..g.vertex_count())
            .map(|v| (g.colors[v], split_root && v != g.root))
            .collect();
        let n = colors.len();
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&v| (colors[v as usize], v));
        let mut pos = vec![0; n];
        let mut cell = vec![0; n];
        let mut len = vec![0; n];
        let mut cells = 0;
        let mut i = 0;
        while i < n {
            let c = colors[elems[i] as usize];
            let mut j = i;
            while j < n && colors[elems[j] as usize] == c {
                pos[elems[j] as usize] = j as u32;
                cell[elems[j] as usize] = i as u32;
                j += 1;
            }
            len[i] = (j - i) as u32;
            cells += 1;
            i = j;
        }
        Partition {
            elems,
            pos,
            cell,
            len,
            cells,
        }
    }

    fn cell_starts(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.cells);
        let mut i = 0;
        while i < self.elems.len() {
            out.push(i as u32);
            i += self.len[i] as usize;
        }
        out
    }

    /// First cell of the smallest size above one.
    fn target_cell(&self) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        let mut i = 0;
        while i < self.elems.len() {
            let l = self.len[i];
            if l > 1 && best.is_none_or(|(_, bl)| l < bl) {
                best = Some((i as u32, l));
                if l == 2 {
                    break;
                }
            }
            i += l as usize;
        }
        best.map(|(s, _)| s)
    }

    #[inline]
    fn swap_to(&mut self, v: u32, p: u32) {
        let old = self.pos[v as usize];
        let u = self.elems[p as usize];
        self.elems[old as usize] = u;
        self.pos[u as usize] = old;
        self.elems[p as usize] = v;
        self.pos[v as usize] = p;
    }

    /// Splits `v` off as a singleton at the end of its cell and refines.
    fn individualize(&mut self, g: &Csr, v: u32, scratch: &mut Scratch) -> u64 {
        let c = self.cell[v as usize];
        let l = self.len[c as usize];
        let last = c + l - 1;
        self.swap_to(v, last);
        self.len[c as usize] = l - 1;
        self.len[last as usize] = 1;
        self.cell[v as usize] = last;
        self.cells += 1;
        let h = mix(mix(0, c as u64), l as u64);
        mix(h, self.refine(g, vec![last], scratch))
    }

    /// Refines to the coarsest equitable partition below the current one,
    /// starting from the given splitter cells. Returns a trace hash that
    /// depends only on the positions and sizes involved.
    fn refine(&mut self, g: &Csr, splitters: Vec<u32>, s: &mut Scratch) -> u64 {
        let n = self.elems.len();
        let mut queue: VecDeque<u32> = VecDeque::new();
        for w in splitters {
            if !s.in_queue[w as usize] {
                s.in_queue[w as usize] = true;
                queue.push_back(w);
            }
        }
        let mut trace = 0u64;
        let mut touched: Vec<u32> = Vec::new();
        let mut touched_cells: Vec<u32> = Vec::new();
        while let Some(w) = queue.pop_front() {
            s.in_queue[w as usize] = false;
            if self.cells == n {
                continue;
            }
            let wl = self.len[w as usize];
            trace = mix(trace, ((w as u64) << 32) | wl as u64);
            touched.clear();
            for i in w..w + wl {
                let x = self.elems[i as usize];
                for &v in g.nbrs(x) {
                    if s.count[v as usize] == 0 {
                        touched.push(v);
                    }
                    s.count[v as usize] += 1;
                }
            }
            touched_cells.clear();
            for &v in &touched {
                let c = self.cell[v as usize];
                if !s.cell_seen[c as usize] {
                    s.cell_seen[c as usize] = true;
                    touched_cells.push(c);
                }
            }
            touched_cells.sort_unstable();
            touched.sort_unstable_by_key(|&v| (self.cell[v as usize], s.count[v as usize]));

            let mut t = 0;
            for &c in &touched_cells {
                s.cell_seen[c as usize] = false;
                let begin = t;
                while t < touched.len() && self.cell[touched[t] as usize] == c {
                    t += 1;
                }
                let group = &touched[begin..t];
                let l = self.len[c as usize];
                if l == 1 {
                    trace = mix(
                        trace,
                        ((c as u64) << 32) | s.count[group[0] as usize] as u64,
                    );
                    continue;
                }
                let untouched = l - group.len() as u32;
                let first_count = s.count[group[0] as usize];
                let last_count = s.count[group[group.len() - 1] as usize];
                if untouched == 0 && first_count == last_count {
                    trace = mix(trace, ((c as u64) << 32) | first_count as u64);
                    continue;
                }
                // Move touched vertices, sorted by count, to the tail of the cell.
                let tail = c + untouched;
                for (k, &v) in group.iter().enumerate() {
                    self.swap_to(v, tail + k as u32);
                }
                let mut frags: Vec<(u32, u32)> = Vec::new();
                if untouched > 0 {
                    frags.push((c, untouched));
                }
                let mut k = 0;
                while k < group.len() {
                    let cnt = s.count[group[k] as usize];
                    let mut j = k;
                    while j < group.len() && s.count[group[j] as usize] == cnt {
                        j += 1;
                    }
                    frags.push((tail + k as u32, (j - k) as u32));
                    trace = mix(trace, ((cnt as u64) << 32) | (j - k) as u64);
                    k = j;
                }
                trace = mix(trace, ((c as u64) << 32) | untouched as u64);
                for &(fs, fl) in &frags {
                    self.len[fs as usize] = fl;
                    if fs != c {
                        for p in fs..fs + fl {
                            self.cell[self.elems[p as usize] as usize] = fs;
                        }
                    }
                }
                self.cells += frags.len() - 1;
                if s.in_queue[c as usize] {
                    for &(fs, _) in &frags[1..] {
                        s.in_queue[fs as usize] = true;
                        queue.push_back(fs);
                    }
                } else {
                    let largest = frags
                        .iter()
                        .enumerate()
                        .max_by(|a, b| a.1 .1.cmp(&b.1 .1).then(b.0.cmp(&a.0)))
                        .unwrap()
                        .0;
                    for (i, &(fs, _)) in frags.iter().enumerate() {
                        if i != largest {
                            s.in_queue[fs as usize] = true;
                            queue.push_back(fs);
                        }
                    }
                }
            }
            for &v in &touched {
                s.count[v as usize] = 0;
            }
        }
        mix(trace, self.cells as u64)
    }
}

/// The coarsest equitable refinement of the coloring, as a cell number per
/// vertex. Cells are numbered in an order that does not depend on labels.
pub fn color_refine(g: &ColoredGraph) -> Vec<usize> {
    let csr = Csr::new(g);
    let mut part = Partition::initial(g, false);
    let mut scratch = Scratch::new(g.vertex_count());
    let starts = part.cell_starts();
    part.refine(&csr, starts, &mut scratch);
    let starts = part.cell_starts();
    let mut index = vec![0; g.vertex_count()];
    for (k, &s) in starts.iter().enumerate() {
        index[s as usize] = k;
    }
    (0..g.vertex_count())
        .map(|v| index[part.cell[v] as usize])
        .collect()
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            count: vec![0; n],
            cell_seen: vec![false; n],
            in_queue: vec![false; n],
        }
    }
}

struct Leaf {
    path: Vec<u64>,
    prefix: Vec<u32>,
    cert: Vec<u64>,
    /// Vertex to position.
    lab: Vec<u32>,
}

struct Search<'a> {
    g: &'a Csr,
    n: usize,
    scratch: Scratch,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<u32>>,
    nodes: u64,
}

impl Search<'_> {
    fn certificate(&self, part: &Partition) -> Vec<u64> {
        let mut edges = Vec::with_capacity(self.g.nbrs.len() / 2);
        for v in 0..self.n as u32 {
            let pv = part.pos[v as usize] as u64;
            for &w in self.g.nbrs(v) {
                let pw = part.pos[w as usize] as u64;
                if pv < pw {
                    edges.push((pv << 32) | pw);
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// Orbits of the group generated by the automorphisms found so far that
    /// fix `prefix` pointwise, as a union-find root per vertex.
    fn orbits(&self, prefix: &[u32]) -> Option<Vec<u32>> {
        let gens: Vec<&Vec<u32>> = self
            .generators
            .iter()
            .filter(|gamma| prefix.iter().all(|&v| gamma[v as usize] == v))
            .collect();
        if gens.is_empty() {
            return None;
        }
        let mut uf: Vec<u32> = (0..self.n as u32).collect();
        fn find(uf: &mut [u32], mut x: u32) -> u32 {
            while uf[x as usize] != x {
                uf[x as usize] = uf[uf[x as usize] as usize];
                x = uf[x as usize];
            }
            x
        }
        for gamma in gens {
            for v in 0..self.n as u32 {
                let (a, b) = (find(&mut uf, v), find(&mut uf, gamma[v as usize]));
                if a != b {
                    uf[a.max(b) as usize] = a.min(b);
                }
            }
        }
        for v in 0..self.n as u32 {
            let r = find(&mut uf, v);
            uf[v as usize] = r;
        }
        Some(uf)
    }

    /// Explores the subtree at `part`. Returns the level to resume at when an
    /// automorphism makes the rest of some ancestor's subtree redundant.
    fn search(
        &mut self,
        part: &Partition,
        path: &mut Vec<u64>,
        prefix: &mut Vec<u32>,
    ) -> Option<usize> {
        self.nodes += 1;
        let level = prefix.len();
        let Some(target) = part.target_cell() else {
            return self.leaf(part, path, prefix);
        };
        let mut children: Vec<u32> =
            part.elems[target as usize..(target + part.len[target as usize]) as usize].to_vec();
        children.sort_unstable();

        let mut explored: Vec<u32> = Vec::new();
        let mut orbit_gens = usize::MAX;
        let mut orbits: Option<Vec<u32>> = None;
        for x in children {
            if !explored.is_empty() {
                if orbit_gens != self.generators.len() {
                    orbits = self.orbits(prefix);
                    orbit_gens = self.generators.len();
                }
                if let Some(uf) = &orbits {
                    if explored.iter().any(|&y| uf[y as usize] == uf[x as usize]) {
                        continue;
                    }
                }
            }
            explored.push(x);
            let mut child = part.clone();
            let h = child.individualize(self.g, x, &mut self.scratch);
            path.push(h);
            prefix.push(x);
            let prune = match &self.best {
                Some(best) => {
                    let k = path.len().min(best.path.len());
                    path[..k].cmp(&best.path[..k]) == Ordering::Greater
                }
                None => false,
            };
            let jump = if prune {
                None
            } else {
                self.search(&child, path, prefix)
            };
            path.pop();
            prefix.pop();
            if let Some(k) = jump {
                if k < level {
                    return Some(k);
                }
            }
        }
        None
    }

    fn leaf(&mut self, part: &Partition, path: &[u64], prefix: &[u32]) -> Option<usize> {
        let cert = self.certificate(part);
        let lab = part.pos.clone();
        let current = Leaf {
            path: path.to_vec(),
            prefix: prefix.to_vec(),
            cert,
            lab,
        };
        if self.first.is_none() {
            self.first = Some(Leaf {
                path: current.path.clone(),
                prefix: current.prefix.clone(),
                cert: current.cert.clone(),
                lab: current.lab.clone(),
            });
            self.best = Some(current);
            return None;
        }
        for stored in [self.first.as_ref().unwrap(), self.best.as_ref().unwrap()] {
            if stored.path == current.path && stored.cert == current.cert {
                // stored.lab[v] == current.lab[gamma(v)]
                let mut inv = vec![0u32; self.n];
                for (v, &p) in current.lab.iter().enumerate() {
                    inv[p as usize] = v as u32;
                }
                let gamma: Vec<u32> = stored.lab.iter().map(|&p| inv[p as usize]).collect();
                let common = stored
                    .prefix
                    .iter()
                    .zip(&current.prefix)
                    .take_while(|(a, b)| a == b)
                    .count();
                self.generators.push(gamma);
                return Some(common);
            }
        }
        let best = self.best.as_ref().unwrap();
        if (&current.path, &current.cert) < (&best.path, &best.cert) {
            self.best = Some(current);
        }
        None
    }
}

pub fn canonize_colored_graph(g: &ColoredGraph) -> CanonicalGraph {
    let n = g.vertex_count();
    let csr = Csr::new(g);
    let mut root = Partition::initial(g, true);
    let mut search = Search {
        g: &csr,
        n,
        scratch: Scratch::new(n),
        first: None,
        best: None,
        generators: Vec::new(),
        nodes: 0,
    };
    let starts = root.cell_starts();
    let h = root.refine(&csr, starts, &mut search.scratch);
    let mut path = vec![h];
    search.search(&root, &mut path, &mut Vec::new());
    let best = search.best.expect("the search reaches at least one leaf");
    let labeling: Vec<usize> = best.lab.iter().map(|&p| p as usize).collect();
    let graph = g.relabel(&labeling);
    assert!(
        g.is_isomorphism(&graph, &labeling),
        "canonical labeling failed self-check"
    );
    CanonicalGraph {
        graph,
        labeling,
        nodes: search.nodes,
    }
}

/// A verified isomorphism `a -> b` if the graphs are isomorphic.
pub fn are_graphs_isomorphic(a: &ColoredGraph, b: &ColoredGraph) -> Option<Vec<usize>> {
    let ca = canonize_colored_graph(a);
    let cb = canonize_colored_graph(b);
    isomorphism_between(a, &ca, b, &cb)
}

/// Composes two canonical labelings into a verified isomorphism.
pub fn isomorphism_between(
    a: &ColoredGraph,
    ca: &CanonicalGraph,
    b: &ColoredGraph,
    cb: &CanonicalGraph,
) -> Option<Vec<usize>> {
    if ca != cb {
        return None;
    }
    let mut inv_b = vec![0; b.vertex_count()];
    for (v, &p) in cb.labeling.iter().enumerate() {
        inv_b[p] = v;
    }
    let map: Vec<usize> = ca.labeling.iter().map(|&p| inv_b[p]).collect();
    assert!(
        a.is_isomorphism(b, &map),
        "composed canonical labelings are not an isomorphism"
    );
    Some(map)
}

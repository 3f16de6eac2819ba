//! Vertex-colored undirected graphs with a designated root.

use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    pub colors: Vec<usize>,
    pub adj: Vec<Vec<usize>>,
    pub root: usize,
}

impl ColoredGraph {
    pub fn new(colors: Vec<usize>, root: usize) -> Self {
        let adj = vec![Vec::new(); colors.len()];
        ColoredGraph { colors, adj, root }
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].retain(|&w| w != v);
        self.adj[v].retain(|&w| w != u);
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Undirected edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> ColoredGraph {
        let n = self.vertex_count();
        let mut colors = vec![0; n];
        let mut adj = vec![Vec::new(); n];
        for v in 0..n {
            colors[perm[v]] = self.colors[v];
            adj[perm[v]] = self.adj[v].iter().map(|&w| perm[w]).collect();
        }
        for ns in &mut adj {
            ns.sort_unstable();
        }
        ColoredGraph {
            colors,
            adj,
            root: perm[self.root],
        }
    }

    /// Whether `map` sends this graph onto `other`, preserving colors, root
    /// and adjacency.
    pub fn is_isomorphism(&self, other: &ColoredGraph, map: &[usize]) -> bool {
        let n = self.vertex_count();
        if other.vertex_count() != n || map.len() != n || other.root != map[self.root] {
            return false;
        }
        let mut hit = vec![false; n];
        for &w in map {
            if w >= n || std::mem::replace(&mut hit[w], true) {
                return false;
            }
        }
        if self.edge_count() != other.edge_count() {
            return false;
        }
        (0..n).all(|v| {
            self.colors[v] == other.colors[map[v]]
                && self.adj[v].len() == other.adj[map[v]].len()
                && self.adj[v].iter().all(|&w| other.has_edge(map[v], map[w]))
        })
    }

    /// Text dump: a header, one color line per vertex and one line per edge
    /// with edges ordered numerically.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "v {} root {}", self.vertex_count(), self.root);
        for (v, c) in self.colors.iter().enumerate() {
            let _ = writeln!(out, "c {v} {c}");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {u} {v}");
        }
        out
    }
}

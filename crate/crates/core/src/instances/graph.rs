use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A simple graph on vertices `1..=n`, directed or undirected.
///
/// Edges are kept sorted and unique. Undirected edges are stored once with
/// `u < v`; a directed graph may hold both `(u, v)` and `(v, u)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    directed: bool,
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a validated graph. Undirected edges given as `(v, u)` with
    /// `v > u` are stored as `(u, v)`; duplicates and self-loops are errors.
    pub fn new(n: usize, directed: bool, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) has an endpoint outside 1..={n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            let e = if directed || u < v { (u, v) } else { (v, u) };
            if !set.insert(e) {
                return Err(Error::invalid(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
        }
        Ok(Graph {
            directed,
            n,
            edges: set.into_iter().collect(),
        })
    }

    pub fn undirected(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, false, edges)
    }

    pub fn directed(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, true, edges)
    }

    pub fn empty(n: usize, directed: bool) -> Self {
        Graph {
            directed,
            n,
            edges: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
        Graph {
            directed: false,
            n,
            edges,
        }
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::param("an undirected cycle needs at least 3 vertices"));
        }
        Self::undirected(n, (1..=n).map(|i| (i, i % n + 1)))
    }

    /// Builds from edges already known to satisfy the invariants.
    pub(crate) fn from_sorted_unchecked(n: usize, directed: bool, edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Graph { directed, n, edges }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let e = if self.directed || u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&e).is_ok()
    }

    /// Out-neighbour lists indexed by vertex (index 0 unused). For undirected
    /// graphs this is the ordinary neighbourhood.
    pub fn out_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            if !self.directed {
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn in_adjacency(&self) -> Vec<Vec<usize>> {
        if !self.directed {
            return self.out_adjacency();
        }
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Undirected degree sequence (index 0 unused).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n + 1];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Adjacency as bitmasks over 0-based vertex positions. Requires `n <= 64`.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64);
        let mut masks = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            masks[u - 1] |= 1 << (v - 1);
            if !self.directed {
                masks[v - 1] |= 1 << (u - 1);
            }
        }
        masks
    }

    /// Subgraph induced by `keep` (sorted, 1-based), relabelled `1..=keep.len()`
    /// in order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut relabel = vec![0usize; self.n + 1];
        for (new, &old) in keep.iter().enumerate() {
            relabel[old] = new + 1;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| relabel[u] != 0 && relabel[v] != 0)
            .map(|&(u, v)| (relabel[u], relabel[v]))
            .collect();
        // Order-preserving relabelling keeps lexicographic order.
        Graph::from_sorted_unchecked(keep.len(), self.directed, edges)
    }

    /// Number of edges with both endpoints in `set` (1-based vertices).
    pub fn edges_within(&self, set: &[usize]) -> usize {
        let mut member = vec![false; self.n + 1];
        for &v in set {
            member[v] = true;
        }
        self.edges.iter().filter(|&&(u, v)| member[u] && member[v]).count()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.edges_within(set) == 0
    }
}

/// A total colouring `vertex -> colour` with colours in `1..=q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<usize>,
}

impl Coloring {
    /// `colors[i]` is the colour of vertex `i + 1`.
    pub fn new(colors: Vec<usize>) -> Result<Self> {
        if colors.contains(&0) {
            return Err(Error::invalid("colours are numbered from 1"));
        }
        Ok(Coloring { colors })
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v - 1]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn max_color(&self) -> usize {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    /// True when total on `g` and no edge is monochromatic.
    pub fn is_legal_for(&self, g: &Graph) -> bool {
        self.colors.len() == g.vertex_count() && g.edges().iter().all(|&(u, v)| self.color(u) != self.color(v))
    }
}

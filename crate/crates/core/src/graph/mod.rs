//! Immutable simple graphs over bitset adjacency rows, and the graph algebra
//! used throughout the crate: complete graphs, cycles, Zykov sums, induced
//! subgraphs and clique machinery.

mod bitset;
mod clique;
mod io;

pub use bitset::{Iter as VertexIter, VertexSet, MAX_VERTICES};
pub use clique::has_clique_within;
pub use io::{parse_edge_list, write_edge_list};

use thiserror::Error;

/// An undirected edge `(u, v)` with `u < v`.
pub type Edge = (usize, usize);

const NO_EDGE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid size {size}: {reason}")]
    InvalidSize { size: usize, reason: &'static str },
    #[error("graph with {0} vertices exceeds the {MAX_VERTICES}-vertex cap")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are kept in lexicographic `(u, v)` order with `u < v`; the position of
/// an edge in that order is its *edge index*, which colorings and CNF
/// encodings key on.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    edges: Vec<Edge>,
    edge_ids: Vec<u32>,
}

impl Graph {
    /// The graph on `n` vertices with no edges. `n = 0` is allowed.
    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        Graph::from_edges(n, std::iter::empty())
    }

    /// Builds a graph from an edge iterator. Endpoint order inside a pair does
    /// not matter; duplicates and loops are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut adj = vec![VertexSet::new(); n];
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if adj[a].contains(b) {
                return Err(GraphError::DuplicateEdge(a.min(b), a.max(b)));
            }
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Ok(Graph::from_adjacency(adj))
    }

    fn from_adjacency(adj: Vec<VertexSet>) -> Graph {
        let n = adj.len();
        let mut edges = Vec::new();
        let mut edge_ids = vec![NO_EDGE; n * n];
        for u in 0..n {
            for v in adj[u].above(u).iter() {
                let id = edges.len() as u32;
                edge_ids[u * n + v] = id;
                edge_ids[v * n + u] = id;
                edges.push((u, v));
            }
        }
        Graph {
            n,
            adj,
            edges,
            edge_ids,
        }
    }

    /// `K_k`, every pair of the `k` vertices adjacent.
    pub fn complete(k: usize) -> Result<Graph, GraphError> {
        if k == 0 {
            return Err(GraphError::InvalidSize {
                size: k,
                reason: "complete graph needs at least one vertex",
            });
        }
        Graph::from_edges(k, (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))))
    }

    /// `C_k` with edges `{i, (i + 1) mod k}`.
    pub fn cycle(k: usize) -> Result<Graph, GraphError> {
        if k < 3 {
            return Err(GraphError::InvalidSize {
                size: k,
                reason: "a simple cycle needs at least three vertices",
            });
        }
        Graph::from_edges(k, (0..k).map(|i| (i, (i + 1) % k)))
    }

    /// `K_4` minus the edge `{0, 1}`.
    pub fn k4_minus_edge() -> Graph {
        Graph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).expect("fixed edge list")
    }

    /// Zykov sum (join): disjoint union with every cross pair joined.
    /// The right operand's vertices are shifted by `self.n()`.
    pub fn zykov_sum(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let left = VertexSet::full(self.n);
        let right = VertexSet::full(n).difference(&left);
        let mut adj = Vec::with_capacity(n);
        for row in &self.adj {
            adj.push(row.union(&right));
        }
        for row in &other.adj {
            let shifted: VertexSet = row.iter().map(|v| v + self.n).collect();
            adj.push(shifted.union(&left));
        }
        Ok(Graph::from_adjacency(adj))
    }

    /// Returns a copy with the extra edge `{u, v}`.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        Graph::from_edges(
            self.n,
            self.edges.iter().copied().chain(std::iter::once((u, v))),
        )
    }

    /// Subgraph induced by `s`, relabelled to `0..|s|` in ascending order.
    /// The second component maps new labels to the original vertices.
    pub fn induced(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        self.check_subset(s)?;
        let map = s.to_vec();
        let mut back = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            back[v] = i;
        }
        let adj = map
            .iter()
            .map(|&v| {
                self.adj[v]
                    .intersection(s)
                    .iter()
                    .map(|u| back[u])
                    .collect()
            })
            .collect();
        Ok((Graph::from_adjacency(adj), map))
    }

    /// `N(v)`.
    pub fn neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(self.adj[v])
    }

    /// `E(U1, U2)`: every edge with one end in `u1` and the other in `u2`,
    /// each listed once, in edge-index order.
    pub fn edges_between(&self, u1: &VertexSet, u2: &VertexSet) -> Result<Vec<Edge>, GraphError> {
        self.check_subset(u1)?;
        self.check_subset(u2)?;
        Ok(self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| {
                (u1.contains(a) && u2.contains(b)) || (u1.contains(b) && u2.contains(a))
            })
            .collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Edges in lexicographic order; the slice position is the edge index.
    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Adjacency rows, indexed by vertex.
    #[inline]
    pub fn adjacency(&self) -> &[VertexSet] {
        &self.adj
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    /// Index of edge `{u, v}` in [`Graph::edges`], if present.
    #[inline]
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        match self.edge_ids[u * self.n + v] {
            NO_EDGE => None,
            id => Some(id as usize),
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Size of the largest clique; 0 for the empty graph.
    pub fn clique_number(&self) -> usize {
        clique::clique_number(self)
    }

    /// Every `k`-clique exactly once, in lexicographic order of sorted members.
    pub fn enumerate_cliques(&self, k: usize) -> Vec<VertexSet> {
        clique::enumerate(self, k)
    }

    /// The lexicographically first `k`-clique, if any.
    pub fn first_clique(&self, k: usize) -> Option<VertexSet> {
        clique::first(self, k)
    }

    /// Checks symmetry, irreflexivity and the edge-count identity.
    pub fn check_invariants(&self) -> bool {
        let degree_sum: usize = self.adj.iter().map(VertexSet::len).sum();
        degree_sum == 2 * self.edges.len()
            && (0..self.n).all(|v| {
                !self.adj[v].contains(v)
                    && self.adj[v]
                        .iter()
                        .all(|u| u < self.n && self.adj[u].contains(v))
            })
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    fn check_subset(&self, s: &VertexSet) -> Result<(), GraphError> {
        match s.last() {
            Some(v) => self.check_vertex(v),
            None => Ok(()),
        }
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

//! Simple undirected graphs with 1-based vertices, as used by DIMACS.
//!
//! Vertex `i` corresponds to polynomial variable `i - 1` (printed `x<i>`).

mod dimacs;
mod generators;
mod oracle;
mod structure;

use std::collections::BTreeSet;
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use dimacs::{parse_dimacs, parse_dimacs_checked, write_dimacs};
pub use generators::{
    gen_complete, gen_cycle, gen_kneser, gen_mycielski, gen_path, gen_random, gen_wheel, GraphSpec,
};
pub use oracle::{oracle_colorable, oracle_colorable_exhaustive};
pub use structure::{components, enumerate_cliques, enumerate_triangles, spanning_tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: u32, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph, orienting every edge as `u < v` and dropping duplicates.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v == 0 || v as usize > n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<(u32, u32)> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n + 1];
        for &(u, v) in &edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, edges, adj })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        u as usize <= self.n && self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        1..=self.n as u32
    }

    /// Vertices of `other` are shifted by `self.n_vertices()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n as u32;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + off, v + off)));
        Graph::new(self.n + other.n, edges).expect("shifted edges stay in range")
    }

    /// Same vertex set, only the given edges (which must belong to `self`).
    pub fn edge_subgraph(&self, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Graph, GraphError> {
        Graph::new(self.n, edges)
    }

    /// Vertices incident to at least one edge.
    pub fn touched_vertices(&self) -> Vec<u32> {
        self.vertices().filter(|&v| self.degree(v) > 0).collect()
    }

    /// `sha256:<hex>` of the canonical DIMACS text.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(write_dimacs(self).as_bytes());
        format!("sha256:{}", hex::encode(digest))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph({} vertices, {} edges)", self.n, self.edges.len())
    }
}

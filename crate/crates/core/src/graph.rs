//! Immutable graphs over dense vertex ids, with an optional bipartition.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

/// An undirected edge.
///
/// Equality, hashing and ordering ignore orientation: `(u, v)` and `(v, u)`
/// are the same edge. Bipartite graphs still store their edges oriented as
/// `(a, b)` with `a` on side A, and the streaming code relies on that.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub const fn new(u: VertexId, v: VertexId) -> Self {
        Edge { u, v }
    }

    /// `(min, max)` of the endpoints.
    pub fn key(&self) -> (VertexId, VertexId) {
        if self.u <= self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    pub fn shares_vertex(&self, other: &Edge) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }

    pub fn reversed(&self) -> Edge {
        Edge::new(self.v, self.u)
    }
}

impl PartialEq for Edge {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Edge {}

impl Hash for Edge {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl From<(VertexId, VertexId)> for Edge {
    fn from((u, v): (VertexId, VertexId)) -> Self {
        Edge::new(u, v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// Per-vertex side labels of a bipartite graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    side: Vec<Side>,
}

impl Bipartition {
    pub fn new(side: Vec<Side>) -> Self {
        Bipartition { side }
    }

    /// Vertices `0..n_a` on side A, the rest on side B.
    pub fn prefix(n: usize, n_a: usize) -> Self {
        assert!(n_a <= n, "side A larger than the vertex set");
        let side = (0..n)
            .map(|v| if v < n_a { Side::A } else { Side::B })
            .collect();
        Bipartition { side }
    }

    pub fn len(&self) -> usize {
        self.side.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side.is_empty()
    }

    pub fn side(&self, v: VertexId) -> Side {
        self.side[v]
    }

    pub fn count_a(&self) -> usize {
        self.side.iter().filter(|s| **s == Side::A).count()
    }

    pub fn crosses(&self, e: &Edge) -> bool {
        self.side[e.u] != self.side[e.v]
    }

    /// Orient `e` as `(a, b)`; `None` if it does not cross.
    pub fn orient(&self, e: Edge) -> Option<Edge> {
        match (self.side[e.u], self.side[e.v]) {
            (Side::A, Side::B) => Some(e),
            (Side::B, Side::A) => Some(e.reversed()),
            _ => None,
        }
    }
}

/// A simple undirected graph: no self-loops, no duplicate edges.
///
/// Edges keep their first-seen input order; duplicates are dropped at
/// construction and counted.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    sorted_keys: Vec<(VertexId, VertexId)>,
    bipartition: Option<Bipartition>,
    duplicates_dropped: usize,
}

impl Graph {
    pub fn general<I, E>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        Self::build(n, edges, None)
    }

    /// Every edge must cross `bip`; stored edges are oriented `(a, b)`.
    pub fn bipartite<I, E>(bip: Bipartition, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let n = bip.len();
        Self::build(n, edges, Some(bip))
    }

    fn build<I, E>(n: usize, edges: I, bip: Option<Bipartition>) -> Result<Graph>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut duplicates = 0;
        for e in edges {
            let mut e: Edge = e.into();
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop(e.u));
            }
            if let Some(bip) = &bip {
                e = bip.orient(e).ok_or(Error::NotCrossing(e))?;
            }
            if seen.insert(e.key()) {
                out.push(e);
            } else {
                duplicates += 1;
            }
        }
        if duplicates > 0 {
            log::warn!("dropped {duplicates} duplicate edges");
        }
        let mut sorted_keys: Vec<_> = seen.into_iter().collect();
        sorted_keys.sort_unstable();
        Ok(Graph {
            n,
            edges: out,
            sorted_keys,
            bipartition: bip,
            duplicates_dropped: duplicates,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn bipartition(&self) -> Option<&Bipartition> {
        self.bipartition.as_ref()
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition.is_some()
    }

    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        self.sorted_keys.binary_search(&e.key()).is_ok()
    }

    /// `log2 n`, floored at 1 so that `1 / log n` stays a valid fraction.
    pub fn log2_n(&self) -> f64 {
        log2_vertices(self.n)
    }
}

pub fn log2_vertices(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};

/// A set of vertex-disjoint edges, stored as a symmetric partner table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    partner: Vec<Option<VertexId>>,
    size: usize,
}

impl Matching {
    pub fn new(n: usize) -> Self {
        Matching {
            partner: vec![None; n],
            size: 0,
        }
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Result<Self> {
        let mut m = Matching::new(n);
        for e in edges {
            if !m.insert(e) {
                let v = if m.is_matched(e.u) { e.u } else { e.v };
                return Err(Error::NotAMatching(v));
            }
        }
        Ok(m)
    }

    /// Number of vertices the partner table covers.
    pub fn n(&self) -> usize {
        self.partner.len()
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn partner(&self, v: VertexId) -> Option<VertexId> {
        self.partner[v]
    }

    pub fn is_matched(&self, v: VertexId) -> bool {
        self.partner[v].is_some()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.partner[e.u] == Some(e.v)
    }

    pub fn can_add(&self, e: &Edge) -> bool {
        e.u != e.v && self.partner[e.u].is_none() && self.partner[e.v].is_none()
    }

    /// Adds `e` if both endpoints are free. Returns whether it was added.
    pub fn insert(&mut self, e: Edge) -> bool {
        if !self.can_add(&e) {
            return false;
        }
        self.partner[e.u] = Some(e.v);
        self.partner[e.v] = Some(e.u);
        self.size += 1;
        true
    }

    pub fn remove(&mut self, e: &Edge) -> bool {
        if !self.contains(e) {
            return false;
        }
        self.partner[e.u] = None;
        self.partner[e.v] = None;
        self.size -= 1;
        true
    }

    /// The matched edge at `v`, oriented `(v, partner)`.
    pub fn edge_at(&self, v: VertexId) -> Option<Edge> {
        self.partner[v].map(|p| Edge::new(v, p))
    }

    /// Edges as `(min, max)`, in increasing order of the smaller endpoint.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.filter(|&p| p > v).map(|p| Edge::new(v, p)))
    }

    pub fn to_vec(&self) -> Vec<Edge> {
        self.edges().collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|_| v))
    }

    /// `self Δ edges`. Fails if the result is not a matching.
    pub fn symmetric_difference(&self, edges: &[Edge]) -> Result<Matching> {
        let mut out = self.clone();
        let (present, absent): (Vec<&Edge>, Vec<&Edge>) =
            edges.iter().partition(|e| self.contains(e));
        for e in present {
            out.remove(e);
        }
        for e in absent {
            if !out.insert(*e) {
                let v = if out.is_matched(e.u) { e.u } else { e.v };
                return Err(Error::NotAMatching(v));
            }
        }
        Ok(out)
    }

    /// Checks this matching against the invariants and against `g`.
    pub fn validate(&self, g: &Graph) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n() != g.n() {
            out.push(Violation::SizeMismatch {
                matching: self.n(),
                graph: g.n(),
            });
            return out;
        }
        for (v, p) in self.partner.iter().enumerate() {
            if let Some(p) = *p {
                if self.partner[p] != Some(v) {
                    out.push(Violation::AsymmetricPartner(v));
                }
            }
        }
        let edges = self.to_vec();
        if edges.len() != self.size {
            out.push(Violation::SizeCounter {
                counted: edges.len(),
                recorded: self.size,
            });
        }
        out.extend(validate_matching(g, &edges));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    SelfLoop(Edge),
    OutOfRange(Edge),
    SharedVertex {
        vertex: VertexId,
        first: Edge,
        second: Edge,
    },
    NotInGraph(Edge),
    AsymmetricPartner(VertexId),
    SizeCounter {
        counted: usize,
        recorded: usize,
    },
    SizeMismatch {
        matching: usize,
        graph: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfLoop(e) => write!(f, "self-loop {e}"),
            Violation::OutOfRange(e) => write!(f, "edge {e} out of range"),
            Violation::SharedVertex {
                vertex,
                first,
                second,
            } => {
                write!(f, "edges {first} and {second} share vertex {vertex}")
            }
            Violation::NotInGraph(e) => write!(f, "edge {e} not in graph"),
            Violation::AsymmetricPartner(v) => write!(f, "partner of {v} is not symmetric"),
            Violation::SizeCounter { counted, recorded } => {
                write!(f, "size counter {recorded} but {counted} edges")
            }
            Violation::SizeMismatch { matching, graph } => {
                write!(f, "matching over {matching} vertices, graph has {graph}")
            }
        }
    }
}

/// Checks that `edges` form a matching of `g`. An empty result means ok.
pub fn validate_matching(g: &Graph, edges: &[Edge]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut owner: HashMap<VertexId, Edge> = HashMap::new();
    for e in edges {
        if e.u >= g.n() || e.v >= g.n() {
            out.push(Violation::OutOfRange(*e));
            continue;
        }
        if e.u == e.v {
            out.push(Violation::SelfLoop(*e));
            continue;
        }
        if !g.has_edge(e) {
            out.push(Violation::NotInGraph(*e));
        }
        for x in [e.u, e.v] {
            if let Some(first) = owner.get(&x) {
                out.push(Violation::SharedVertex {
                    vertex: x,
                    first: *first,
                    second: *e,
                });
            } else {
                owner.insert(x, *e);
            }
        }
    }
    out
}

/// Order-preserving filter over an edge sequence.
pub fn filter_edges<I, P>(edges: I, mut pred: P) -> impl Iterator<Item = Edge>
where
    I: IntoIterator<Item = Edge>,
    P: FnMut(&Edge) -> bool,
{
    edges.into_iter().filter(move |e| pred(e))
}

//! Short alternating augmenting paths and their application to a matching.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Edge, VertexId};
use crate::matching::Matching;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AugPathKind {
    ThreeAug,
    FiveAug,
}

/// An alternating path of 3 or 5 edges, starting and ending with a
/// non-matching edge.
///
/// A 3-path is `(wing, matched, wing)`; a 5-path is
/// `(upper wing, matched, connector, matched, lower wing)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugPath {
    edges: Vec<Edge>,
    kind: AugPathKind,
}

impl AugPath {
    pub fn three(first: Edge, matched: Edge, last: Edge) -> Self {
        AugPath {
            edges: vec![first, matched, last],
            kind: AugPathKind::ThreeAug,
        }
    }

    pub fn five(upper: Edge, e0: Edge, connector: Edge, e1: Edge, lower: Edge) -> Self {
        AugPath {
            edges: vec![upper, e0, connector, e1, lower],
            kind: AugPathKind::FiveAug,
        }
    }

    pub fn from_edges(edges: Vec<Edge>) -> Result<Self> {
        let kind = match edges.len() {
            3 => AugPathKind::ThreeAug,
            5 => AugPathKind::FiveAug,
            k => {
                return Err(Error::InvalidAugPath(format!(
                    "length {k}, expected 3 or 5"
                )))
            }
        };
        Ok(AugPath { edges, kind })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn kind(&self) -> AugPathKind {
        self.kind
    }

    /// Vertices along the path, in order. Fails if consecutive edges do not
    /// chain or a vertex repeats.
    pub fn vertices(&self) -> Result<Vec<VertexId>> {
        let (e0, e1) = (self.edges[0], self.edges[1]);
        let start = if e1.touches(e0.v) && !e1.touches(e0.u) {
            e0.u
        } else if e1.touches(e0.u) && !e1.touches(e0.v) {
            e0.v
        } else {
            return Err(Error::InvalidAugPath(format!(
                "edges {e0} and {e1} do not chain"
            )));
        };
        let mut walk = vec![start];
        let mut at = start;
        for e in &self.edges {
            let next = if e.u == at {
                e.v
            } else if e.v == at {
                e.u
            } else {
                return Err(Error::InvalidAugPath(format!(
                    "edge {e} does not continue at {at}"
                )));
            };
            walk.push(next);
            at = next;
        }
        let distinct: HashSet<_> = walk.iter().collect();
        if distinct.len() != walk.len() {
            return Err(Error::InvalidAugPath("path revisits a vertex".into()));
        }
        Ok(walk)
    }

    /// Checks alternation and free endpoints against `m`; returns the vertex walk.
    pub fn validate(&self, m: &Matching) -> Result<Vec<VertexId>> {
        let walk = self.vertices()?;
        for &v in &walk {
            if v >= m.n() {
                return Err(Error::InvalidAugPath(format!("vertex {v} out of range")));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let should_match = i % 2 == 1;
            if m.contains(e) != should_match {
                return Err(Error::InvalidAugPath(format!(
                    "edge {e} at position {i} should {}be matched",
                    if should_match { "" } else { "not " }
                )));
            }
        }
        for v in [walk[0], walk[walk.len() - 1]] {
            if m.is_matched(v) {
                return Err(Error::InvalidAugPath(format!("endpoint {v} is matched")));
            }
        }
        Ok(walk)
    }
}

/// A family of pairwise vertex-disjoint augmenting paths.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AugPathSet {
    pub paths: Vec<AugPath>,
}

impl AugPathSet {
    pub fn new(paths: Vec<AugPath>) -> Self {
        AugPathSet { paths }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AugPath> {
        self.paths.iter()
    }

    pub fn all_edges(&self) -> Vec<Edge> {
        self.paths
            .iter()
            .flat_map(|p| p.edges.iter().copied())
            .collect()
    }

    pub fn validate(&self, m: &Matching) -> Result<()> {
        let mut used = HashSet::new();
        for p in &self.paths {
            for v in p.validate(m)? {
                if !used.insert(v) {
                    return Err(Error::OverlappingPaths(v));
                }
            }
        }
        Ok(())
    }
}

/// `m Δ U`: grows `m` by exactly `|U|`. Rejects invalid path families.
pub fn apply_augmenting_paths(m: &Matching, u: &AugPathSet) -> Result<Matching> {
    u.validate(m)?;
    let out = m.symmetric_difference(&u.all_edges())?;
    debug_assert_eq!(out.len(), m.len() + u.len());
    Ok(out)
}

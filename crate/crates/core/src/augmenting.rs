//! Building vertex-disjoint 3- and 5-augmenting paths out of wing matchings.
//!
//! Edges are read in bipartite orientation `(a, b)`. An upper wing joins a
//! matched A vertex to a free B vertex, a lower wing joins a matched B
//! vertex to a free A vertex.

use std::collections::HashSet;

use crate::augpath::{AugPath, AugPathSet};
use crate::error::{Error, Result};
use crate::graph::{Edge, VertexId};
use crate::matching::Matching;

/// `M₀` together with its upper wings `P₁` and lower wings `Q₁`.
///
/// `M_P` is the set of `M₀` edges touched by `P₁`, `M_Q` those touched by
/// `Q₁`. The context indexes `B(M_P)` and `A(M_Q)`, the two vertex sets the
/// later phases match into.
#[derive(Clone, Debug)]
pub struct WingContext {
    m0: Matching,
    p1: Matching,
    q1: Matching,
    /// B endpoint of an `M_P` edge.
    b_of_mp: Vec<bool>,
    /// A endpoint of an `M_Q` edge.
    a_of_mq: Vec<bool>,
}

impl WingContext {
    pub fn new(m0: Matching, p1: Matching, q1: Matching) -> Result<Self> {
        let n = m0.n();
        if p1.n() != n || q1.n() != n {
            return Err(Error::WingContract(
                "matchings over different vertex sets".into(),
            ));
        }
        let mut b_of_mp = vec![false; n];
        let mut a_of_mq = vec![false; n];
        for (wings, far, label) in [(&p1, &mut b_of_mp, "P1"), (&q1, &mut a_of_mq, "Q1")] {
            for e in wings.edges() {
                let anchor = match (m0.is_matched(e.u), m0.is_matched(e.v)) {
                    (true, false) => e.u,
                    (false, true) => e.v,
                    _ => {
                        return Err(Error::WingContract(format!(
                            "{label} edge {e} must have exactly one endpoint in V(M0)"
                        )))
                    }
                };
                let other = m0.partner(anchor).expect("anchor is matched");
                if far[anchor] {
                    return Err(Error::WingContract(format!(
                        "{label} wings on both ends of M0 edge ({anchor}, {other})"
                    )));
                }
                far[other] = true;
            }
        }
        // the two wing families must attach to opposite ends of shared M0 edges
        for v in 0..n {
            if b_of_mp[v] && a_of_mq[v] {
                return Err(Error::WingContract(format!(
                    "vertex {v} is both B(M_P) and A(M_Q)"
                )));
            }
        }
        Ok(WingContext {
            m0,
            p1,
            q1,
            b_of_mp,
            a_of_mq,
        })
    }

    pub fn m0(&self) -> &Matching {
        &self.m0
    }

    pub fn p1(&self) -> &Matching {
        &self.p1
    }

    pub fn q1(&self) -> &Matching {
        &self.q1
    }

    pub fn in_b_of_mp(&self, v: VertexId) -> bool {
        self.b_of_mp[v]
    }

    pub fn in_a_of_mq(&self, v: VertexId) -> bool {
        self.a_of_mq[v]
    }

    /// `M_P` edges oriented `(a, b)`.
    pub fn mp_edges(&self) -> Vec<Edge> {
        (0..self.m0.n())
            .filter(|&b| self.b_of_mp[b])
            .map(|b| Edge::new(self.m0.partner(b).unwrap(), b))
            .collect()
    }

    /// `M_Q` edges oriented `(a, b)`.
    pub fn mq_edges(&self) -> Vec<Edge> {
        (0..self.m0.n())
            .filter(|&a| self.a_of_mq[a])
            .map(|a| Edge::new(a, self.m0.partner(a).unwrap()))
            .collect()
    }

    /// Upper wing `(a, b_free)` at the A end of an `M_P` edge.
    fn upper_wing(&self, a: VertexId) -> Option<Edge> {
        self.p1.partner(a).map(|w| Edge::new(a, w))
    }

    /// Lower wing `(a_free, b)` at the B end of an `M_Q` edge.
    fn lower_wing(&self, b: VertexId) -> Option<Edge> {
        self.q1.partner(b).map(|w| Edge::new(w, b))
    }

    fn m0_partner(&self, v: VertexId) -> Result<VertexId> {
        self.m0
            .partner(v)
            .ok_or_else(|| Error::WingContract(format!("vertex {v} is not matched in M0")))
    }
}

/// One 3-augmenting path per `P₂` edge `(a', b)`: the upper wing of the `M₀`
/// edge at `b`, that edge, then `(a', b)`.
pub fn three_aug_from_wings(ctx: &WingContext, p2: &Matching) -> Result<AugPathSet> {
    let mut paths = Vec::with_capacity(p2.len());
    for e in p2.edges() {
        let (a_free, b) = if ctx.in_b_of_mp(e.v) {
            (e.u, e.v)
        } else if ctx.in_b_of_mp(e.u) {
            (e.v, e.u)
        } else {
            return Err(Error::WingContract(format!(
                "P2 edge {e} has no endpoint in B(M_P)"
            )));
        };
        if ctx.m0.is_matched(a_free) {
            return Err(Error::WingContract(format!(
                "P2 endpoint {a_free} is matched in M0"
            )));
        }
        let a = ctx.m0_partner(b)?;
        let wing = ctx.upper_wing(a).expect("M_P edges carry an upper wing");
        paths.push(AugPath::three(wing, Edge::new(a, b), Edge::new(a_free, b)));
    }
    Ok(AugPathSet::new(paths))
}

/// Mirror of [`three_aug_from_wings`] for `Q₂` edges `(a, b')` with
/// `a ∈ A(M_Q)`.
pub fn three_aug_from_lower_wings(ctx: &WingContext, q2: &Matching) -> Result<AugPathSet> {
    let mut paths = Vec::with_capacity(q2.len());
    for e in q2.edges() {
        let (a, b_free) = if ctx.in_a_of_mq(e.u) {
            (e.u, e.v)
        } else if ctx.in_a_of_mq(e.v) {
            (e.v, e.u)
        } else {
            return Err(Error::WingContract(format!(
                "Q2 edge {e} has no endpoint in A(M_Q)"
            )));
        };
        if ctx.m0.is_matched(b_free) {
            return Err(Error::WingContract(format!(
                "Q2 endpoint {b_free} is matched in M0"
            )));
        }
        let b = ctx.m0_partner(a)?;
        let wing = ctx.lower_wing(b).expect("M_Q edges carry a lower wing");
        paths.push(AugPath::three(wing, Edge::new(a, b), Edge::new(a, b_free)));
    }
    Ok(AugPathSet::new(paths))
}

/// 3-augmenting paths for `M_P ∩ M_Q`: edges that already own both wings.
pub fn both_wings_paths(ctx: &WingContext) -> AugPathSet {
    let paths = (0..ctx.m0.n())
        .filter(|&b| ctx.b_of_mp[b])
        .filter_map(|b| {
            let a = ctx.m0.partner(b)?;
            if !ctx.a_of_mq[a] {
                return None;
            }
            Some(AugPath::three(
                ctx.upper_wing(a)?,
                Edge::new(a, b),
                ctx.lower_wing(b)?,
            ))
        })
        .collect();
    AugPathSet::new(paths)
}

/// Paths through connector edges `(a, b)`, `a ∈ A(M_Q)`, `b ∈ B(M_P)`.
///
/// With `e₀` the `M₀` edge at `b` and `e₁` the one at `a`: if `e₀ = e₁` the
/// result is the 3-path `(upper wing, e₀, lower wing)`, otherwise the 5-path
/// `(upper wing of e₀, e₀, connector, e₁, lower wing of e₁)`.
///
/// One path per connector unless an `M₀` edge serves as `e₀` for one
/// connector and `e₁` for another; such later connectors are skipped.
pub fn paths_from_connector(ctx: &WingContext, c: &Matching) -> Result<AugPathSet> {
    let mut used: HashSet<VertexId> = HashSet::new();
    let mut paths = Vec::with_capacity(c.len());
    for e in c.edges() {
        let (a, b) = if ctx.in_a_of_mq(e.u) && ctx.in_b_of_mp(e.v) {
            (e.u, e.v)
        } else if ctx.in_a_of_mq(e.v) && ctx.in_b_of_mp(e.u) {
            (e.v, e.u)
        } else {
            return Err(Error::WingContract(format!(
                "connector {e} is not in A(M_Q) x B(M_P)"
            )));
        };
        let a0 = ctx.m0_partner(b)?;
        let b1 = ctx.m0_partner(a)?;
        let upper = ctx.upper_wing(a0).expect("M_P edges carry an upper wing");
        let lower = ctx.lower_wing(b1).expect("M_Q edges carry a lower wing");
        let path = if a0 == a {
            AugPath::three(upper, Edge::new(a, b), lower)
        } else {
            AugPath::five(
                upper,
                Edge::new(a0, b),
                Edge::new(a, b),
                Edge::new(a, b1),
                lower,
            )
        };
        if claim_vertices(&mut used, &path) {
            paths.push(path);
        }
    }
    Ok(AugPathSet::new(paths))
}

fn path_vertices(p: &AugPath) -> impl Iterator<Item = VertexId> + '_ {
    p.edges().iter().flat_map(|e| [e.u, e.v])
}

fn claim_vertices(used: &mut HashSet<VertexId>, p: &AugPath) -> bool {
    if path_vertices(p).any(|v| used.contains(&v)) {
        return false;
    }
    used.extend(path_vertices(p));
    true
}

/// Combines internally disjoint families into one disjoint family.
///
/// Sweeps `candidates` in the given priority order keeping every path that
/// misses the vertices already taken. If the sweep ends smaller than the
/// largest single family, that family is returned instead.
pub fn select_disjoint(candidates: &[AugPathSet]) -> AugPathSet {
    let mut used = HashSet::new();
    let mut picked = Vec::new();
    for family in candidates {
        for p in family.iter() {
            if claim_vertices(&mut used, p) {
                picked.push(p.clone());
            }
        }
    }
    match candidates.iter().max_by_key(|f| f.len()) {
        Some(best) if best.len() > picked.len() => best.clone(),
        _ => AugPathSet::new(picked),
    }
}

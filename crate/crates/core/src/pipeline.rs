//! One-pass matching pipelines: plain greedy, the bipartite pipeline and the
//! general-graph reduction onto it.
//!
//! Each pipeline reads the stream once, stores a small candidate edge set
//! and finishes with an exact offline matching over what it kept.

use serde::{Deserialize, Serialize};

use crate::augmenter::{Augmenter, AugmenterParams, AugmenterRun, CandidateSet};
use crate::error::{Error, Result};
use crate::exact::{max_matching_bipartite, max_matching_general};
use crate::graph::{Bipartition, Edge, Graph, VertexId};
use crate::greedy::{GreedyMatcher, ResidualCollector};
use crate::matching::Matching;
use crate::stream::{EdgeStream, MemoryMeter, Segment, StreamAudit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunFlag {
    BudgetExceeded,
    DepthCapped,
    DoubleRead,
}

impl std::fmt::Display for RunFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RunFlag::BudgetExceeded => "budget-exceeded",
            RunFlag::DepthCapped => "depth-capped",
            RunFlag::DoubleRead => "double-read",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunArtifacts {
    pub m0_size: usize,
    pub t_size: usize,
    pub r_size: usize,
    pub final_size: usize,
    pub peak_edges: usize,
    pub recursion_depth: usize,
    pub flags: Vec<RunFlag>,
    pub audit: StreamAudit,
}

/// A pipeline's answer plus the intermediate sets diagnostics look at.
#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub matching: Matching,
    pub artifacts: RunArtifacts,
    /// The prefix greedy matching; for plain greedy, the whole answer.
    pub m0: Matching,
    /// Augmenter output; for `gm` it is in view coordinates.
    pub candidates: Option<CandidateSet>,
    pub view: Option<BipartiteView>,
    /// `gm` only: the inner matching mapped back to original ids.
    pub m1: Option<Matching>,
}

fn check_fresh(stream: &EdgeStream) -> Result<()> {
    if stream.cursor() != 1 {
        return Err(Error::SinglePassViolation {
            requested: 1,
            cursor: stream.cursor(),
        });
    }
    Ok(())
}

fn artifacts(
    m0: &Matching,
    t_size: usize,
    r_size: usize,
    final_size: usize,
    cands: Option<&CandidateSet>,
    stream: &EdgeStream,
    meter: &MemoryMeter,
) -> RunArtifacts {
    let audit = stream.audit();
    let mut flags = Vec::new();
    if meter.budget_exceeded() {
        flags.push(RunFlag::BudgetExceeded);
    }
    if cands.is_some_and(|c| c.depth_capped) {
        flags.push(RunFlag::DepthCapped);
    }
    if !audit.single_pass() {
        flags.push(RunFlag::DoubleRead);
    }
    RunArtifacts {
        m0_size: m0.len(),
        t_size,
        r_size,
        final_size,
        peak_edges: meter.stored_peak(),
        recursion_depth: cands.map_or(0, |c| c.recursion_depth_used),
        flags,
        audit,
    }
}

/// Greedy over the whole stream.
pub fn greedy_pipeline(
    graph: &Graph,
    stream: &mut EdgeStream,
    meter: &mut MemoryMeter,
) -> Result<PipelineOutput> {
    check_fresh(stream)?;
    let mut g = GreedyMatcher::new(graph.n());
    for (_, e) in stream.iterate(stream.full())? {
        g.offer(e, meter);
    }
    let m = g.into_matching();
    let artifacts = artifacts(&m, 0, 0, m.len(), None, stream, meter);
    Ok(PipelineOutput {
        matching: m.clone(),
        artifacts,
        m0: m,
        candidates: None,
        view: None,
        m1: None,
    })
}

/// Push-driven bipartite pipeline over raw stream positions `range`.
///
/// The first `prefix_frac` of `range` builds `M₀` greedily. Later edges
/// with exactly one endpoint in `V(M₀)` go to the augmenter, edges missing
/// `V(M₀)` are stored, and the rest are dropped. Edges must arrive
/// oriented `(a, b)`; positions outside `range` must not be pushed.
pub struct BmRun<'s> {
    bip: Bipartition,
    strategy: &'s dyn Augmenter,
    params: AugmenterParams,
    prefix: Segment,
    suffix: Segment,
    greedy: Option<GreedyMatcher>,
    m0: Matching,
    aug: Option<AugmenterRun<'s>>,
    residual: ResidualCollector,
}

/// What a finished [`BmRun`] kept.
#[derive(Clone, Debug)]
pub struct BmOutcome {
    pub matching: Matching,
    pub m0: Matching,
    pub candidates: CandidateSet,
    pub residual: Vec<Edge>,
}

impl<'s> BmRun<'s> {
    pub fn new(
        strategy: &'s dyn Augmenter,
        bip: Bipartition,
        range: Segment,
        params: &AugmenterParams,
    ) -> Result<Self> {
        params.validate()?;
        let prefix = range.sub(0.0, params.prefix_frac)?;
        let suffix = prefix.after(range.hi);
        let n = bip.len();
        Ok(BmRun {
            bip,
            strategy,
            params: params.clone(),
            prefix,
            suffix,
            greedy: Some(GreedyMatcher::new(n)),
            m0: Matching::new(n),
            aug: None,
            residual: ResidualCollector::new(),
        })
    }

    pub fn prefix(&self) -> Segment {
        self.prefix
    }

    fn close_prefix(&mut self) -> Result<()> {
        if let Some(g) = self.greedy.take() {
            self.m0 = g.into_matching();
            let run = AugmenterRun::new(self.strategy, self.m0.clone(), self.suffix, &self.params)?;
            self.aug = Some(run);
        }
        Ok(())
    }

    pub fn push(&mut self, pos: usize, e: Edge, meter: &mut MemoryMeter) -> Result<()> {
        if pos <= self.prefix.hi {
            if let Some(g) = self.greedy.as_mut() {
                g.offer(e, meter);
                return Ok(());
            }
        }
        self.close_prefix()?;
        match (self.m0.is_matched(e.u), self.m0.is_matched(e.v)) {
            (true, false) | (false, true) => {
                self.aug
                    .as_mut()
                    .expect("suffix started")
                    .push(pos, e, meter)?;
            }
            (false, false) => self.residual.offer(e, meter),
            (true, true) => {}
        }
        Ok(())
    }

    /// Exact maximum matching over `M₀ ∪ T ∪ R`.
    pub fn finish(mut self, meter: &mut MemoryMeter) -> Result<BmOutcome> {
        self.close_prefix()?;
        let candidates = self.aug.take().expect("suffix started").finish(meter)?;
        let residual = self.residual.into_edges();
        let mut kept: Vec<Edge> = self
            .m0
            .edges()
            .chain(candidates.edges.iter().copied())
            .collect();
        kept.extend(residual.iter().copied());
        kept.sort_unstable();
        kept.dedup();
        let matching = max_matching_bipartite(self.bip.len(), &kept, &self.bip)?;
        Ok(BmOutcome {
            matching,
            m0: self.m0,
            candidates,
            residual,
        })
    }
}

/// The bipartite pipeline on a bipartite graph's stream.
pub fn bm(
    graph: &Graph,
    stream: &mut EdgeStream,
    params: &AugmenterParams,
    strategy: &dyn Augmenter,
    meter: &mut MemoryMeter,
) -> Result<PipelineOutput> {
    let bip = graph.bipartition().ok_or(Error::NotBipartite)?.clone();
    check_fresh(stream)?;
    let mut run = BmRun::new(strategy, bip.clone(), stream.full(), params)?;
    for (pos, e) in stream.iterate(stream.full())? {
        let e = bip.orient(e).ok_or(Error::NotCrossing(e))?;
        run.push(pos, e, meter)?;
    }
    let out = run.finish(meter)?;
    let artifacts = artifacts(
        &out.m0,
        out.candidates.edges.len(),
        out.residual.len(),
        out.matching.len(),
        Some(&out.candidates),
        stream,
        meter,
    );
    Ok(PipelineOutput {
        matching: out.matching,
        artifacts,
        m0: out.m0,
        candidates: Some(out.candidates),
        view: None,
        m1: None,
    })
}

/// `G′ = (V(M₀), V̄(M₀))` with `V(M₀)` relabelled to `0..k` (side A) and
/// the other vertices to `k..n` (side B), both in increasing id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteView {
    to_view: Vec<VertexId>,
    to_orig: Vec<VertexId>,
    k: usize,
}

impl BipartiteView {
    pub fn new(m0: &Matching) -> Self {
        let n = m0.n();
        let (a, b): (Vec<VertexId>, Vec<VertexId>) = (0..n).partition(|&v| m0.is_matched(v));
        let k = a.len();
        let to_orig: Vec<VertexId> = a.into_iter().chain(b).collect();
        let mut to_view = vec![0; n];
        for (view, &orig) in to_orig.iter().enumerate() {
            to_view[orig] = view;
        }
        BipartiteView {
            to_view,
            to_orig,
            k,
        }
    }

    pub fn n(&self) -> usize {
        self.to_orig.len()
    }

    pub fn side_a_len(&self) -> usize {
        self.k
    }

    pub fn bipartition(&self) -> Bipartition {
        Bipartition::prefix(self.n(), self.k)
    }

    pub fn in_side_a(&self, orig: VertexId) -> bool {
        self.to_view[orig] < self.k
    }

    /// `(a, b)` in view ids if exactly one endpoint is in `V(M₀)`.
    pub fn admit(&self, e: Edge) -> Option<Edge> {
        let (x, y) = (self.to_view[e.u], self.to_view[e.v]);
        match (x < self.k, y < self.k) {
            (true, false) => Some(Edge::new(x, y)),
            (false, true) => Some(Edge::new(y, x)),
            _ => None,
        }
    }

    pub fn to_original(&self, e: Edge) -> Edge {
        Edge::new(self.to_orig[e.u], self.to_orig[e.v])
    }

    pub fn to_view(&self, v: VertexId) -> VertexId {
        self.to_view[v]
    }
}

/// General-graph reduction: greedy `M₀` on the prefix, the bipartite
/// pipeline on the `G′` sub-stream of the suffix, and the exact general
/// matching over `M₀ ∪ R ∪ M₁`.
///
/// The inner pipeline addresses the same raw positions as the outer one:
/// its range is the outer suffix and its prefix the first `prefix_frac` of
/// that range.
pub fn gm(
    graph: &Graph,
    stream: &mut EdgeStream,
    params: &AugmenterParams,
    strategy: &dyn Augmenter,
    meter: &mut MemoryMeter,
) -> Result<PipelineOutput> {
    params.validate()?;
    check_fresh(stream)?;
    let n = graph.n();
    let prefix = stream.full().sub(0.0, params.prefix_frac)?;
    let suffix = prefix.after(stream.m());

    let mut greedy = GreedyMatcher::new(n);
    for (_, e) in stream.iterate(prefix)? {
        greedy.offer(e, meter);
    }
    let m0 = greedy.into_matching();
    let view = BipartiteView::new(&m0);

    let mut inner = BmRun::new(strategy, view.bipartition(), suffix, params)?;
    let mut residual = ResidualCollector::new();
    for (pos, e) in stream.iterate(suffix)? {
        if let Some(ve) = view.admit(e) {
            inner.push(pos, ve, meter)?;
        } else if !m0.is_matched(e.u) && !m0.is_matched(e.v) {
            residual.offer(e, meter);
        }
    }
    let inner = inner.finish(meter)?;
    let m1 = Matching::from_edges(n, inner.matching.edges().map(|e| view.to_original(e)))?;

    let residual = residual.into_edges();
    let mut kept: Vec<Edge> = m0
        .edges()
        .chain(m1.edges())
        .chain(residual.iter().copied())
        .collect();
    kept.sort_unstable();
    kept.dedup();
    let matching = max_matching_general(n, &kept);

    let t_size = inner.candidates.edges.len() + inner.residual.len();
    let artifacts = artifacts(
        &m0,
        t_size,
        residual.len(),
        matching.len(),
        Some(&inner.candidates),
        stream,
        meter,
    );
    Ok(PipelineOutput {
        matching,
        artifacts,
        m0,
        candidates: Some(inner.candidates),
        view: Some(view),
        m1: Some(m1),
    })
}

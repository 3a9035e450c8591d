//! Recursive one-pass augmenters over a stream suffix.
//!
//! An augmenter starts from a matching `M₀` and spends short greedy phases
//! of `τ·L` stream positions (for a suffix of length `L`) growing wing
//! matchings. If the wings yield enough disjoint augmenting paths it applies
//! them and restarts on the rest of the suffix; otherwise it stores the
//! residual edges needed to finish offline and returns a candidate edge set
//! `T ⊇ M₀`.
//!
//! Two strategies share the driver: [`Barg`] (3-augmenting paths, two phases)
//! and [`Farg`] (3- and 5-augmenting paths, a third connector phase).
//! Edges must arrive oriented `(a, b)`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::augmenting::{
    both_wings_paths, paths_from_connector, select_disjoint, three_aug_from_lower_wings,
    three_aug_from_wings, WingContext,
};
use crate::augpath::{apply_augmenting_paths, AugPathSet};
use crate::error::{Error, Result};
use crate::graph::{log2_vertices, Edge};
use crate::greedy::GreedyMatcher;
use crate::matching::Matching;
use crate::stream::{MemoryMeter, Segment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Paper,
    Practical,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Preset::Paper),
            "practical" => Ok(Preset::Practical),
            other => Err(Error::InvalidParams(format!("unknown preset `{other}`"))),
        }
    }
}

/// Phase sizes, recursion test and prefix length shared by the pipelines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AugmenterParams {
    /// Fraction of the current suffix per greedy phase.
    pub tau: f64,
    /// Recurse when at least this fraction of `|M₀|` paths is found.
    pub recursion_threshold_frac: f64,
    pub max_recursion_depth: usize,
    /// Fraction of the stream given to the initial greedy matching.
    pub prefix_frac: f64,
    /// Lower bound on each phase length, in positions.
    pub min_segment_edges: usize,
}

impl AugmenterParams {
    /// `τ = 1/(100 log³n)`, threshold and prefix `1/log n`, depth cap
    /// `2 log²n`, phases never shorter than one position.
    pub fn paper(n: usize) -> Self {
        let log_n = log2_vertices(n);
        AugmenterParams {
            tau: 1.0 / (100.0 * log_n.powi(3)),
            recursion_threshold_frac: (1.0 / log_n).min(1.0),
            max_recursion_depth: (2.0 * log_n * log_n).ceil() as usize,
            prefix_frac: (1.0 / log_n).min(1.0),
            min_segment_edges: 1,
        }
    }

    /// Desk-scale constants: `τ = 0.05`, threshold 0.05, depth 16, prefix `1/log n`.
    pub fn practical(n: usize) -> Self {
        AugmenterParams {
            tau: 0.05,
            recursion_threshold_frac: 0.05,
            max_recursion_depth: 16,
            prefix_frac: (1.0 / log2_vertices(n)).min(1.0),
            min_segment_edges: 0,
        }
    }

    pub fn preset(preset: Preset, n: usize) -> Self {
        match preset {
            Preset::Paper => Self::paper(n),
            Preset::Practical => Self::practical(n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let frac_ok = |x: f64| x > 0.0 && x <= 1.0;
        if !(self.tau > 0.0 && self.tau <= 1.0 / 6.0) {
            return Err(Error::InvalidParams(format!(
                "tau {} outside (0, 1/6]",
                self.tau
            )));
        }
        if !frac_ok(self.recursion_threshold_frac) {
            return Err(Error::InvalidParams(format!(
                "threshold {} outside (0, 1]",
                self.recursion_threshold_frac
            )));
        }
        if !frac_ok(self.prefix_frac) {
            return Err(Error::InvalidParams(format!(
                "prefix {} outside (0, 1]",
                self.prefix_frac
            )));
        }
        if self.max_recursion_depth < 1 {
            return Err(Error::InvalidParams("depth must be at least 1".into()));
        }
        Ok(())
    }

    /// Smallest stream fraction any greedy pass runs on.
    pub fn gamma_min(&self) -> f64 {
        self.tau.min(self.prefix_frac)
    }
}

/// Phase matchings of one level, handed to the strategy once the phases end.
pub struct LevelMatchings<'a> {
    pub ctx: &'a WingContext,
    pub p2: &'a Matching,
    pub q2: &'a Matching,
    pub c: Option<&'a Matching>,
}

/// A path-finding strategy for the shared augmenter driver.
pub trait Augmenter: Send + Sync {
    fn name(&self) -> &'static str;

    /// Number of `τ` phases before the recursion test: 2 for wings only,
    /// 3 with a connector phase.
    fn phases(&self) -> usize;

    /// Disjoint augmenting paths available from one level's matchings.
    fn find_paths(&self, level: &LevelMatchings<'_>) -> Result<AugPathSet>;
}

/// 3-augmenting paths only; uses the larger of the `P` and `Q` families
/// (ties go to `P`).
#[derive(Clone, Copy, Debug, Default)]
pub struct Barg;

impl Augmenter for Barg {
    fn name(&self) -> &'static str {
        "barg"
    }

    fn phases(&self) -> usize {
        2
    }

    fn find_paths(&self, level: &LevelMatchings<'_>) -> Result<AugPathSet> {
        let p = three_aug_from_wings(level.ctx, level.p2)?;
        let q = three_aug_from_lower_wings(level.ctx, level.q2)?;
        Ok(if q.len() > p.len() { q } else { p })
    }
}

/// 3- and 5-augmenting paths, combined in priority order: connector paths,
/// `M_P ∩ M_Q` paths, then the `P` and `Q` families.
#[derive(Clone, Copy, Debug, Default)]
pub struct Farg;

impl Augmenter for Farg {
    fn name(&self) -> &'static str {
        "farg"
    }

    fn phases(&self) -> usize {
        3
    }

    fn find_paths(&self, level: &LevelMatchings<'_>) -> Result<AugPathSet> {
        let connector = match level.c {
            Some(c) => paths_from_connector(level.ctx, c)?,
            None => AugPathSet::default(),
        };
        let families = [
            connector,
            both_wings_paths(level.ctx),
            three_aug_from_wings(level.ctx, level.p2)?,
            three_aug_from_lower_wings(level.ctx, level.q2)?,
        ];
        Ok(select_disjoint(&families))
    }
}

pub fn augmenter_by_name(name: &str) -> Option<&'static dyn Augmenter> {
    match name {
        "barg" => Some(&Barg),
        "farg" => Some(&Farg),
        _ => None,
    }
}

/// Per-level counters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub depth: usize,
    pub suffix: Option<Segment>,
    pub m0: usize,
    pub p1: usize,
    pub q1: usize,
    pub p2: usize,
    pub q2: usize,
    pub c: usize,
    pub paths_found: usize,
    pub recursed: bool,
}

/// The final level's sets, kept for diagnostics and predicate audits.
#[derive(Clone, Debug, Default)]
pub struct CandidateComponents {
    pub m0: Vec<Edge>,
    pub p1: Vec<Edge>,
    pub p2: Vec<Edge>,
    pub q1: Vec<Edge>,
    pub q2: Vec<Edge>,
    pub c: Vec<Edge>,
    /// `R₁ … R₅`; `R₅` stays empty without a connector phase.
    pub r: [Vec<Edge>; 5],
    pub mp: Vec<Edge>,
    pub mq: Vec<Edge>,
    /// Suffix positions the collectors ran over.
    pub collect_segment: Option<Segment>,
}

/// Output `T` of an augmenter run.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    /// `T`, deduplicated and sorted.
    pub edges: Vec<Edge>,
    pub components: CandidateComponents,
    /// The matching after all applied augmentations.
    pub final_matching: Matching,
    pub recursion_depth_used: usize,
    pub depth_capped: bool,
    pub levels: Vec<LevelSummary>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    Phase(usize),
    Collect,
}

struct Level {
    m0: Matching,
    suffix: Segment,
    phase_ends: [usize; 3],
    stage: Stage,
    p1: GreedyMatcher,
    q1: GreedyMatcher,
    ctx: Option<WingContext>,
    p2: GreedyMatcher,
    q2: GreedyMatcher,
    c: GreedyMatcher,
    r: [Vec<Edge>; 5],
    summary: LevelSummary,
}

impl Level {
    fn new(
        m0: Matching,
        suffix: Segment,
        params: &AugmenterParams,
        phases: usize,
        depth: usize,
    ) -> Self {
        let n = m0.n();
        let len = suffix.len();
        let mut phase_ends = [suffix.hi; 3];
        for (k, end) in phase_ends.iter_mut().enumerate().take(phases) {
            let frac_end = ((k + 1) as f64 * params.tau).min(1.0);
            let by_frac = suffix.sub(0.0, frac_end).map(|s| s.len()).unwrap_or(len);
            let taken = by_frac.max((k + 1) * params.min_segment_edges).min(len);
            *end = suffix.lo + taken - 1;
        }
        let summary = LevelSummary {
            depth,
            suffix: Some(suffix),
            m0: m0.len(),
            ..Default::default()
        };
        Level {
            m0,
            suffix,
            phase_ends,
            stage: Stage::Phase(0),
            p1: GreedyMatcher::new(n),
            q1: GreedyMatcher::new(n),
            ctx: None,
            p2: GreedyMatcher::new(n),
            q2: GreedyMatcher::new(n),
            c: GreedyMatcher::new(n),
            r: Default::default(),
            summary,
        }
    }

    fn ctx(&self) -> &WingContext {
        self.ctx
            .as_ref()
            .expect("wing context is built after phase 1")
    }

    fn phase_matchings_len(&self) -> usize {
        let wings = match &self.ctx {
            Some(ctx) => ctx.p1().len() + ctx.q1().len(),
            None => self.p1.matching().len() + self.q1.matching().len(),
        };
        wings + self.p2.matching().len() + self.q2.matching().len() + self.c.matching().len()
    }

    fn offer(&mut self, e: Edge, has_connector: bool, meter: &mut MemoryMeter) {
        let (a, b) = (e.u, e.v);
        let a_in = self.m0.is_matched(a);
        let b_in = self.m0.is_matched(b);
        match self.stage {
            Stage::Phase(0) => {
                if a_in && !b_in {
                    self.p1.offer(e, meter);
                } else if !a_in && b_in {
                    self.q1.offer(e, meter);
                }
            }
            Stage::Phase(1) => {
                let ctx = self.ctx.as_ref().expect("phase 2 follows phase 1");
                if !a_in && ctx.in_b_of_mp(b) {
                    self.p2.offer(e, meter);
                } else if ctx.in_a_of_mq(a) && !b_in {
                    self.q2.offer(e, meter);
                }
            }
            Stage::Phase(_) => {
                let ctx = self.ctx.as_ref().expect("phase 3 follows phase 1");
                if ctx.in_a_of_mq(a) && ctx.in_b_of_mp(b) {
                    self.c.offer(e, meter);
                }
            }
            Stage::Collect => {
                let ctx = self.ctx.as_ref().expect("collection follows phase 1");
                let misses = |m: &Matching| !m.is_matched(a) && !m.is_matched(b);
                let hits = [
                    !a_in && ctx.in_b_of_mp(b) && misses(self.p2.matching()),
                    ctx.in_a_of_mq(a) && !b_in && misses(self.q2.matching()),
                    a_in && !b_in && misses(ctx.p1()),
                    !a_in && b_in && misses(ctx.q1()),
                    has_connector
                        && ctx.in_a_of_mq(a)
                        && ctx.in_b_of_mp(b)
                        && misses(self.c.matching()),
                ];
                let mut stored = false;
                for (bucket, hit) in self.r.iter_mut().zip(hits) {
                    if hit {
                        bucket.push(e);
                        stored = true;
                    }
                }
                // one stored copy per edge, however many collectors want it
                if stored {
                    meter.store(1);
                }
            }
        }
    }
}

/// Push-driven augmenter execution over a suffix of raw stream positions.
pub struct AugmenterRun<'s> {
    strategy: &'s dyn Augmenter,
    params: AugmenterParams,
    hi: usize,
    depth: usize,
    depth_capped: bool,
    /// Matchings of finished levels; part of `T`.
    retained: HashSet<Edge>,
    level: Level,
    levels: Vec<LevelSummary>,
}

impl<'s> AugmenterRun<'s> {
    /// `m0` is assumed to be charged to the meter by the caller already.
    pub fn new(
        strategy: &'s dyn Augmenter,
        m0: Matching,
        suffix: Segment,
        params: &AugmenterParams,
    ) -> Result<Self> {
        params.validate()?;
        let retained: HashSet<Edge> = m0.edges().collect();
        let level = Level::new(m0, suffix, params, strategy.phases(), 0);
        Ok(AugmenterRun {
            strategy,
            params: params.clone(),
            hi: suffix.hi,
            depth: 0,
            depth_capped: false,
            retained,
            level,
            levels: Vec::new(),
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Current matching (after every augmentation applied so far).
    pub fn matching(&self) -> &Matching {
        &self.level.m0
    }

    /// Feeds the edge at stream position `pos`; positions must increase.
    pub fn push(&mut self, pos: usize, e: Edge, meter: &mut MemoryMeter) -> Result<()> {
        debug_assert!(pos <= self.hi);
        while let Stage::Phase(k) = self.level.stage {
            if pos <= self.level.phase_ends[k] {
                break;
            }
            self.end_phase(meter)?;
        }
        let has_connector = self.strategy.phases() >= 3;
        self.level.offer(e, has_connector, meter);
        Ok(())
    }

    fn end_phase(&mut self, meter: &mut MemoryMeter) -> Result<()> {
        let Stage::Phase(k) = self.level.stage else {
            return Ok(());
        };
        let lv = &mut self.level;
        if k == 0 {
            let p1 = std::mem::replace(&mut lv.p1, GreedyMatcher::new(0)).into_matching();
            let q1 = std::mem::replace(&mut lv.q1, GreedyMatcher::new(0)).into_matching();
            lv.summary.p1 = p1.len();
            lv.summary.q1 = q1.len();
            lv.ctx = Some(WingContext::new(lv.m0.clone(), p1, q1)?);
        }
        if k + 1 < self.strategy.phases() {
            self.level.stage = Stage::Phase(k + 1);
            return Ok(());
        }
        self.decide(meter)
    }

    fn decide(&mut self, meter: &mut MemoryMeter) -> Result<()> {
        let lv = &mut self.level;
        let has_connector = self.strategy.phases() >= 3;
        let paths = self.strategy.find_paths(&LevelMatchings {
            ctx: lv.ctx(),
            p2: lv.p2.matching(),
            q2: lv.q2.matching(),
            c: has_connector.then(|| lv.c.matching()),
        })?;
        lv.summary.p2 = lv.p2.matching().len();
        lv.summary.q2 = lv.q2.matching().len();
        lv.summary.c = lv.c.matching().len();
        lv.summary.paths_found = paths.len();

        let threshold = self.params.recursion_threshold_frac * lv.m0.len() as f64;
        let enough = !paths.is_empty() && paths.len() as f64 >= threshold;
        if enough && self.depth < self.params.max_recursion_depth {
            let grown = apply_augmenting_paths(&lv.m0, &paths)?;
            let used = lv.phase_ends[self.strategy.phases() - 1];
            meter.release(lv.phase_matchings_len())?;
            for e in grown.edges() {
                if self.retained.insert(e) {
                    meter.store(1);
                }
            }
            let mut summary = std::mem::take(&mut lv.summary);
            summary.recursed = true;
            self.levels.push(summary);
            self.depth += 1;
            let suffix = Segment::new(used + 1, self.hi.max(used));
            self.level = Level::new(
                grown,
                suffix,
                &self.params,
                self.strategy.phases(),
                self.depth,
            );
            return Ok(());
        }
        if enough {
            self.depth_capped = true;
        }
        lv.stage = Stage::Collect;
        Ok(())
    }

    /// Closes any open phases and returns `T`.
    pub fn finish(mut self, meter: &mut MemoryMeter) -> Result<CandidateSet> {
        while let Stage::Phase(_) = self.level.stage {
            self.end_phase(meter)?;
        }
        let lv = self.level;
        let ctx = lv.ctx.expect("collection follows phase 1");
        let last_phase = lv.phase_ends[self.strategy.phases() - 1];
        let components = CandidateComponents {
            m0: lv.m0.to_vec(),
            p1: oriented(ctx.p1(), ctx.m0(), true),
            q1: oriented(ctx.q1(), ctx.m0(), false),
            p2: lv
                .p2
                .matching()
                .edges()
                .map(|e| orient_p2(e, &ctx))
                .collect(),
            q2: lv
                .q2
                .matching()
                .edges()
                .map(|e| orient_q2(e, &ctx))
                .collect(),
            c: lv.c.matching().edges().map(|e| orient_c(e, &ctx)).collect(),
            mp: ctx.mp_edges(),
            mq: ctx.mq_edges(),
            r: lv.r,
            collect_segment: Some(Segment::new(last_phase + 1, lv.suffix.hi.max(last_phase))),
        };

        let mut t: HashSet<Edge> = self.retained;
        t.extend(lv.m0.edges());
        for part in [
            &components.p1,
            &components.q1,
            &components.p2,
            &components.q2,
            &components.c,
        ] {
            t.extend(part.iter().copied());
        }
        for r in &components.r {
            t.extend(r.iter().copied());
        }
        let mut edges: Vec<Edge> = t.into_iter().collect();
        edges.sort_unstable();

        let mut levels = self.levels;
        levels.push(lv.summary);
        Ok(CandidateSet {
            edges,
            components,
            final_matching: lv.m0,
            recursion_depth_used: self.depth,
            depth_capped: self.depth_capped,
            levels,
        })
    }
}

// Wing edges come back out of a `Matching` as (min, max); restore (a, b).
fn oriented(wings: &Matching, m0: &Matching, upper: bool) -> Vec<Edge> {
    wings
        .edges()
        .map(|e| {
            let matched_first = m0.is_matched(e.u);
            // upper wings: matched end is A; lower wings: matched end is B
            if matched_first == upper {
                e
            } else {
                e.reversed()
            }
        })
        .collect()
}

fn orient_p2(e: Edge, ctx: &WingContext) -> Edge {
    if ctx.in_b_of_mp(e.v) {
        e
    } else {
        e.reversed()
    }
}

fn orient_q2(e: Edge, ctx: &WingContext) -> Edge {
    if ctx.in_a_of_mq(e.u) {
        e
    } else {
        e.reversed()
    }
}

fn orient_c(e: Edge, ctx: &WingContext) -> Edge {
    if ctx.in_a_of_mq(e.u) && ctx.in_b_of_mp(e.v) {
        e
    } else {
        e.reversed()
    }
}

/// Runs `strategy` over `edges`, given as `(position, edge)` in increasing
/// position order inside `suffix`.
pub fn run_augmenter<I>(
    strategy: &dyn Augmenter,
    m0: Matching,
    suffix: Segment,
    edges: I,
    params: &AugmenterParams,
    meter: &mut MemoryMeter,
) -> Result<CandidateSet>
where
    I: IntoIterator<Item = (usize, Edge)>,
{
    let mut run = AugmenterRun::new(strategy, m0, suffix, params)?;
    for (pos, e) in edges {
        run.push(pos, e, meter)?;
    }
    run.finish(meter)
}

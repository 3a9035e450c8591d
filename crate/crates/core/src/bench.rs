//! Seeded experiment runner, per-trial diagnostics and report emission.
//!
//! Trial `i` shuffles with seed `base_seed + i`. Random instances are
//! regenerated per trial from a seed derived from the same value, so a
//! report is reproducible from its config alone.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augmenter::{AugmenterParams, Preset};
use crate::error::{Error, Result};
use crate::exact::{max_matching_bipartite, max_matching_general};
use crate::generators::{
    gen_konrad_hard, gen_planted_bipartite, gen_random_general, load_edgelist,
};
use crate::graph::{Edge, Graph};
use crate::matching::{validate_matching, Matching};
use crate::pipeline::{BipartiteView, PipelineOutput};
use crate::registry::Registry;
use crate::stream::{shuffle, MemoryMeter};

/// `konrad:<n>`, `planted:<n>,<p>`, `gnp:<n>,<p>` or `file:<path>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum InstanceSpec {
    Konrad { n: usize },
    Planted { n: usize, p: f64 },
    Gnp { n: usize, p: f64 },
    File { path: PathBuf },
}

impl InstanceSpec {
    /// Whether every trial sees the same graph.
    pub fn is_fixed(&self) -> bool {
        matches!(
            self,
            InstanceSpec::Konrad { .. } | InstanceSpec::File { .. }
        )
    }

    /// Known to be a general (non-bipartite) instance before building it.
    pub fn is_general(&self) -> bool {
        matches!(self, InstanceSpec::Gnp { .. })
    }

    pub fn build(&self, trial_seed: u64) -> Result<Graph> {
        let seed = graph_seed(trial_seed);
        match self {
            InstanceSpec::Konrad { n } => gen_konrad_hard(*n),
            InstanceSpec::Planted { n, p } => gen_planted_bipartite(*n, *p, seed),
            InstanceSpec::Gnp { n, p } => gen_random_general(*n, *p, seed),
            InstanceSpec::File { path } => load_edgelist(path),
        }
    }
}

// Keeps the generator's ChaCha stream apart from the shuffle's.
fn graph_seed(trial_seed: u64) -> u64 {
    trial_seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceSpec::Konrad { n } => write!(f, "konrad:{n}"),
            InstanceSpec::Planted { n, p } => write!(f, "planted:{n},{p}"),
            InstanceSpec::Gnp { n, p } => write!(f, "gnp:{n},{p}"),
            InstanceSpec::File { path } => write!(f, "file:{}", path.display()),
        }
    }
}

impl FromStr for InstanceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidInstance(format!("`{s}`: {msg}"));
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| bad("expected <kind>:<args>"))?;
        let n_p = || -> Result<(usize, f64)> {
            let (n, p) = rest
                .split_once(',')
                .ok_or_else(|| bad("expected <n>,<p>"))?;
            let n = n.trim().parse().map_err(|_| bad("bad vertex count"))?;
            let p = p.trim().parse().map_err(|_| bad("bad probability"))?;
            Ok((n, p))
        };
        match kind {
            "konrad" => Ok(InstanceSpec::Konrad {
                n: rest.trim().parse().map_err(|_| bad("bad vertex count"))?,
            }),
            "planted" => n_p().map(|(n, p)| InstanceSpec::Planted { n, p }),
            "gnp" => n_p().map(|(n, p)| InstanceSpec::Gnp { n, p }),
            "file" if !rest.is_empty() => Ok(InstanceSpec::File { path: rest.into() }),
            _ => Err(bad("unknown instance kind")),
        }
    }
}

impl From<InstanceSpec> for String {
    fn from(s: InstanceSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for InstanceSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Explicit values that replace the preset's.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamOverrides {
    pub tau: Option<f64>,
    pub threshold: Option<f64>,
    pub depth: Option<usize>,
    pub prefix: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub algorithm: String,
    pub preset: Preset,
    pub overrides: ParamOverrides,
    pub trials: usize,
    pub base_seed: u64,
    pub budget: Option<usize>,
    pub diagnostics: bool,
}

impl ExperimentConfig {
    pub fn new(instance: InstanceSpec, algorithm: impl Into<String>) -> Self {
        ExperimentConfig {
            instance,
            algorithm: algorithm.into(),
            preset: Preset::Practical,
            overrides: ParamOverrides::default(),
            trials: 1,
            base_seed: 0,
            budget: None,
            diagnostics: false,
        }
    }

    /// Preset values for an `n`-vertex graph with overrides applied.
    pub fn params(&self, n: usize) -> AugmenterParams {
        let mut p = AugmenterParams::preset(self.preset, n);
        let o = &self.overrides;
        if let Some(t) = o.tau {
            p.tau = t;
        }
        if let Some(t) = o.threshold {
            p.recursion_threshold_frac = t;
        }
        if let Some(d) = o.depth {
            p.max_recursion_depth = d;
        }
        if let Some(f) = o.prefix {
            p.prefix_frac = f;
        }
        p
    }

    pub fn validate(&self, registry: &Registry) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        let algo = registry.get(&self.algorithm)?;
        if algo.needs_bipartite() && self.instance.is_general() {
            return Err(Error::InvalidParams(format!(
                "{} needs a bipartite instance, got {}",
                self.algorithm, self.instance
            )));
        }
        // any n gives the same validity verdict for the override fields
        self.params(1024).validate()
    }
}

/// Analysis quantities against one fixed maximum matching `M*`.
///
/// `M*₁` are the `M*` edges touching `V(M₀)`, `M*₂` the rest;
/// `α = |M*₁|/μ` and `δ = |M₀|/|M*₁| − 1/2`. `R_P`, `R_Q` and `M*_C` use the
/// wings and `M_P`, `M_Q` of the last augmenter level (bipartite pipelines
/// only).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub mu: usize,
    pub m0: usize,
    pub mstar1: usize,
    pub mstar2: usize,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mstar_c: Option<usize>,
    /// `μ(G′)` for the reduction's bipartite view (`gm` only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_prime_mu: Option<usize>,
    /// `|M*₁| + |M*₂| = μ` and `|M₀| ≤ |M*₁| ≤ 2|M₀|`.
    pub identities_hold: bool,
    /// `μ(G′) ≥ 2|M*₁| − 2|M₀|` (`gm` only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction_inequality_holds: Option<bool>,
}

/// `|M*₁|` and `|M*₂|` for `M*` split by `V(m0)`.
pub fn split_optimum(mstar: &Matching, m0: &Matching) -> (usize, usize) {
    let touching = mstar
        .edges()
        .filter(|e| m0.is_matched(e.u) || m0.is_matched(e.v))
        .count();
    (touching, mstar.len() - touching)
}

/// Maximum matching of `G′`: the edges of `g` with exactly one endpoint in `V(m0)`.
pub fn g_prime_mu(g: &Graph, m0: &Matching) -> usize {
    let view = BipartiteView::new(m0);
    let edges: Vec<Edge> = g.edges().iter().filter_map(|&e| view.admit(e)).collect();
    max_matching_bipartite(view.n(), &edges, &view.bipartition())
        .expect("view edges cross by construction")
        .len()
}

pub fn diagnose(g: &Graph, mstar: &Matching, out: &PipelineOutput) -> Diagnostics {
    let mu = mstar.len();
    let m0 = &out.m0;
    let (mstar1, mstar2) = split_optimum(mstar, m0);
    let alpha = if mu == 0 {
        0.0
    } else {
        mstar1 as f64 / mu as f64
    };
    let delta = (mstar1 > 0).then(|| m0.len() as f64 / mstar1 as f64 - 0.5);
    let identities_hold = mstar1 + mstar2 == mu && m0.len() <= mstar1 && mstar1 <= 2 * m0.len();

    let (mut r_p, mut r_q, mut mstar_c) = (None, None, None);
    if let (Some(c), None) = (&out.candidates, &out.view) {
        let comp = &c.components;
        let mstar2_edges: Vec<Edge> = mstar
            .edges()
            .filter(|e| !m0.is_matched(e.u) && !m0.is_matched(e.v))
            .collect();
        let touches = |wings: &[Edge], e: &Edge| wings.iter().any(|w| w.shares_vertex(e));
        r_p = Some(mstar2_edges.iter().filter(|e| touches(&comp.p1, e)).count());
        r_q = Some(mstar2_edges.iter().filter(|e| touches(&comp.q1, e)).count());
        let n = g.n();
        let mut a_mq = vec![false; n];
        let mut b_mp = vec![false; n];
        comp.mq.iter().for_each(|e| a_mq[e.u] = true);
        comp.mp.iter().for_each(|e| b_mp[e.v] = true);
        mstar_c = Some(
            mstar
                .edges()
                .filter(|e| (a_mq[e.u] && b_mp[e.v]) || (a_mq[e.v] && b_mp[e.u]))
                .count(),
        );
    }

    let (g_prime, reduction) = match &out.view {
        Some(_) => {
            let gp = g_prime_mu(g, m0);
            (Some(gp), Some(gp + 2 * m0.len() >= 2 * mstar1))
        }
        None => (None, None),
    };

    Diagnostics {
        mu,
        m0: m0.len(),
        mstar1,
        mstar2,
        alpha,
        delta,
        r_p,
        r_q,
        mstar_c,
        g_prime_mu: g_prime,
        identities_hold,
        reduction_inequality_holds: reduction,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub matching_size: usize,
    pub mu_exact: usize,
    pub ratio: f64,
    pub m0_size: usize,
    pub t_size: usize,
    pub r_size: usize,
    pub peak_edges: usize,
    pub recursion_depth: usize,
    pub runtime_ms: f64,
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
}

impl TrialRecord {
    fn failed(seed: u64, err: &Error) -> Self {
        TrialRecord {
            seed,
            n: 0,
            m: 0,
            matching_size: 0,
            mu_exact: 0,
            ratio: 0.0,
            m0_size: 0,
            t_size: 0,
            r_size: 0,
            peak_edges: 0,
            recursion_depth: 0,
            runtime_ms: 0.0,
            flags: vec![format!("error: {err}")],
            diagnostics: None,
        }
    }

    pub fn is_error(&self) -> bool {
        self.flags.iter().any(|f| f.starts_with("error"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub trials: usize,
    pub failed_trials: usize,
    /// Over successful trials; absent when none succeeded.
    pub mean_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    /// Nearest-rank 95th percentile.
    pub p95_peak_edges: Option<usize>,
    pub budget_flagged: usize,
    pub depth_capped: usize,
}

impl Aggregates {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let ok: Vec<&TrialRecord> = records.iter().filter(|r| !r.is_error()).collect();
        let ratios: Vec<f64> = ok.iter().map(|r| r.ratio).collect();
        let mut peaks: Vec<usize> = ok.iter().map(|r| r.peak_edges).collect();
        peaks.sort_unstable();
        let p95 = (!peaks.is_empty()).then(|| {
            let rank = (0.95 * peaks.len() as f64).ceil() as usize;
            peaks[rank.clamp(1, peaks.len()) - 1]
        });
        let flagged = |name: &str| {
            records
                .iter()
                .filter(|r| r.flags.iter().any(|f| f == name))
                .count()
        };
        Aggregates {
            trials: records.len(),
            failed_trials: records.len() - ok.len(),
            mean_ratio: (!ratios.is_empty())
                .then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
            min_ratio: ratios.iter().copied().reduce(f64::min),
            p95_peak_edges: p95,
            budget_flagged: flagged("budget-exceeded"),
            depth_capped: flagged("depth-capped"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub aggregates: Aggregates,
}

impl RunReport {
    /// Zeroes wall-clock fields so two reports can be compared exactly.
    pub fn without_runtime(mut self) -> Self {
        for r in &mut self.records {
            r.runtime_ms = 0.0;
        }
        self
    }
}

fn exact_optimum(g: &Graph) -> Result<Matching> {
    match g.bipartition() {
        Some(b) => max_matching_bipartite(g.n(), g.edges(), b),
        None => Ok(max_matching_general(g.n(), g.edges())),
    }
}

/// Runs every trial of `config` (in parallel) and aggregates.
pub fn run(config: &ExperimentConfig, registry: &Registry) -> Result<RunReport> {
    config.validate(registry)?;
    let fixed = if config.instance.is_fixed() {
        let g = config.instance.build(config.base_seed)?;
        let mstar = exact_optimum(&g)?;
        Some((g, mstar))
    } else {
        None
    };

    let mut records: Vec<TrialRecord> = (0..config.trials as u64)
        .into_par_iter()
        .map(|i| {
            let seed = config.base_seed.wrapping_add(i);
            let res = match &fixed {
                Some((g, mstar)) => run_trial(config, registry, g, mstar, seed),
                None => config.instance.build(seed).and_then(|g| {
                    let mstar = exact_optimum(&g)?;
                    run_trial(config, registry, &g, &mstar, seed)
                }),
            };
            res.unwrap_or_else(|e| {
                log::warn!("trial seed {seed} failed: {e}");
                TrialRecord::failed(seed, &e)
            })
        })
        .collect();
    records.sort_by_key(|r| r.seed);
    let aggregates = Aggregates::from_records(&records);
    Ok(RunReport {
        config: config.clone(),
        records,
        aggregates,
    })
}

fn run_trial(
    config: &ExperimentConfig,
    registry: &Registry,
    g: &Graph,
    mstar: &Matching,
    seed: u64,
) -> Result<TrialRecord> {
    let algo = registry.get(&config.algorithm)?;
    let params = config.params(g.n());
    let mu = mstar.len();
    let mut meter = MemoryMeter::new(config.budget);
    let start = Instant::now();
    let out = if g.m() == 0 {
        None
    } else {
        let mut stream = shuffle(g, seed)?;
        Some(algo.run(g, &mut stream, &params, &mut meter)?)
    };
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;

    let Some(out) = out else {
        return Ok(TrialRecord {
            seed,
            n: g.n(),
            m: 0,
            matching_size: 0,
            mu_exact: 0,
            ratio: 1.0,
            m0_size: 0,
            t_size: 0,
            r_size: 0,
            peak_edges: 0,
            recursion_depth: 0,
            runtime_ms,
            flags: Vec::new(),
            diagnostics: None,
        });
    };

    let mut flags: Vec<String> = out.artifacts.flags.iter().map(|f| f.to_string()).collect();
    let violations = validate_matching(g, &out.matching.to_vec());
    if !violations.is_empty() {
        flags.push(format!("invalid-matching: {}", violations[0]));
    }
    let diagnostics = config.diagnostics.then(|| diagnose(g, mstar, &out));
    if diagnostics
        .as_ref()
        .is_some_and(|d| !d.identities_hold || d.reduction_inequality_holds == Some(false))
    {
        flags.push("diagnostic-identity-violated".into());
    }
    let size = out.matching.len();
    Ok(TrialRecord {
        seed,
        n: g.n(),
        m: g.m(),
        matching_size: size,
        mu_exact: mu,
        ratio: if mu == 0 {
            1.0
        } else {
            size as f64 / mu as f64
        },
        m0_size: out.artifacts.m0_size,
        t_size: out.artifacts.t_size,
        r_size: out.artifacts.r_size,
        peak_edges: out.artifacts.peak_edges,
        recursion_depth: out.artifacts.recursion_depth,
        runtime_ms,
        flags,
        diagnostics,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidParams(format!("unknown format `{other}`"))),
        }
    }
}

/// Writes `report` to `path`, or stdout when `path` is `None`.
pub fn emit(report: &RunReport, format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => write_report(report, format, std::fs::File::create(p)?),
        None => write_report(report, format, std::io::stdout().lock()),
    }
}

pub fn write_report<W: Write>(report: &RunReport, format: Format, mut w: W) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, report)?;
            writeln!(w)?;
        }
        Format::Csv => write_csv(report, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

const CSV_COLUMNS: [&str; 13] = [
    "seed",
    "n",
    "m",
    "matching_size",
    "mu_exact",
    "ratio",
    "m0_size",
    "t_size",
    "r_size",
    "peak_edges",
    "recursion_depth",
    "runtime_ms",
    "flags",
];

const CSV_DIAG_COLUMNS: [&str; 11] = [
    "alpha",
    "delta",
    "mstar1",
    "mstar2",
    "r_p",
    "r_q",
    "mstar_c",
    "g_prime_mu",
    "identities_hold",
    "reduction_inequality_holds",
    "mu_diag",
];

fn write_csv<W: Write>(report: &RunReport, w: W) -> Result<()> {
    let with_diag = report.records.iter().any(|r| r.diagnostics.is_some());
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
    if with_diag {
        header.extend(CSV_DIAG_COLUMNS);
    }
    out.write_record(&header)?;
    let opt = |x: Option<String>| x.unwrap_or_default();
    for r in &report.records {
        let mut row = vec![
            r.seed.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.matching_size.to_string(),
            r.mu_exact.to_string(),
            r.ratio.to_string(),
            r.m0_size.to_string(),
            r.t_size.to_string(),
            r.r_size.to_string(),
            r.peak_edges.to_string(),
            r.recursion_depth.to_string(),
            format!("{:.3}", r.runtime_ms),
            r.flags.join(";"),
        ];
        if with_diag {
            match &r.diagnostics {
                Some(d) => row.extend([
                    d.alpha.to_string(),
                    opt(d.delta.map(|x| x.to_string())),
                    d.mstar1.to_string(),
                    d.mstar2.to_string(),
                    opt(d.r_p.map(|x| x.to_string())),
                    opt(d.r_q.map(|x| x.to_string())),
                    opt(d.mstar_c.map(|x| x.to_string())),
                    opt(d.g_prime_mu.map(|x| x.to_string())),
                    d.identities_hold.to_string(),
                    opt(d.reduction_inequality_holds.map(|x| x.to_string())),
                    d.mu.to_string(),
                ]),
                None => row.extend(std::iter::repeat_n(String::new(), CSV_DIAG_COLUMNS.len())),
            }
        }
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

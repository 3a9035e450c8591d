//! Named matching algorithms, selected at runtime.

use crate::augmenter::{Augmenter, AugmenterParams, Barg, Farg};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pipeline::{bm, gm, greedy_pipeline, PipelineOutput};
use crate::stream::{EdgeStream, MemoryMeter};

pub trait MatchingAlgorithm: Send + Sync {
    fn name(&self) -> &str;

    /// Whether the algorithm only accepts bipartite graphs.
    fn needs_bipartite(&self) -> bool {
        false
    }

    fn run(
        &self,
        graph: &Graph,
        stream: &mut EdgeStream,
        params: &AugmenterParams,
        meter: &mut MemoryMeter,
    ) -> Result<PipelineOutput>;
}

pub struct GreedyAlgorithm;

impl MatchingAlgorithm for GreedyAlgorithm {
    fn name(&self) -> &str {
        "greedy"
    }

    fn run(
        &self,
        graph: &Graph,
        stream: &mut EdgeStream,
        _params: &AugmenterParams,
        meter: &mut MemoryMeter,
    ) -> Result<PipelineOutput> {
        greedy_pipeline(graph, stream, meter)
    }
}

pub struct BmAlgorithm {
    name: String,
    augmenter: Box<dyn Augmenter>,
}

impl BmAlgorithm {
    pub fn new(augmenter: Box<dyn Augmenter>) -> Self {
        BmAlgorithm {
            name: format!("bm-{}", augmenter.name()),
            augmenter,
        }
    }
}

impl MatchingAlgorithm for BmAlgorithm {
    fn name(&self) -> &str {
        &self.name
    }

    fn needs_bipartite(&self) -> bool {
        true
    }

    fn run(
        &self,
        graph: &Graph,
        stream: &mut EdgeStream,
        params: &AugmenterParams,
        meter: &mut MemoryMeter,
    ) -> Result<PipelineOutput> {
        bm(graph, stream, params, self.augmenter.as_ref(), meter)
    }
}

/// `gm` with the given augmenter inside its bipartite stage.
pub struct GmAlgorithm {
    name: String,
    augmenter: Box<dyn Augmenter>,
}

impl GmAlgorithm {
    pub fn new(name: impl Into<String>, augmenter: Box<dyn Augmenter>) -> Self {
        GmAlgorithm {
            name: name.into(),
            augmenter,
        }
    }
}

impl MatchingAlgorithm for GmAlgorithm {
    fn name(&self) -> &str {
        &self.name
    }

    fn run(
        &self,
        graph: &Graph,
        stream: &mut EdgeStream,
        params: &AugmenterParams,
        meter: &mut MemoryMeter,
    ) -> Result<PipelineOutput> {
        gm(graph, stream, params, self.augmenter.as_ref(), meter)
    }
}

pub struct Registry {
    algorithms: Vec<Box<dyn MatchingAlgorithm>>,
}

impl Default for Registry {
    /// `greedy`, `bm-barg`, `bm-farg`, `gm` (FARG inside) and `gm-barg`.
    fn default() -> Self {
        let mut r = Registry::empty();
        r.register(Box::new(GreedyAlgorithm));
        r.register(Box::new(BmAlgorithm::new(Box::new(Barg))));
        r.register(Box::new(BmAlgorithm::new(Box::new(Farg))));
        r.register(Box::new(GmAlgorithm::new("gm", Box::new(Farg))));
        r.register(Box::new(GmAlgorithm::new("gm-barg", Box::new(Barg))));
        r
    }
}

impl Registry {
    pub fn empty() -> Self {
        Registry {
            algorithms: Vec::new(),
        }
    }

    /// Adds `algo`, replacing any algorithm with the same name.
    pub fn register(&mut self, algo: Box<dyn MatchingAlgorithm>) {
        self.algorithms.retain(|a| a.name() != algo.name());
        self.algorithms.push(algo);
    }

    pub fn get(&self, name: &str) -> Result<&dyn MatchingAlgorithm> {
        self.algorithms
            .iter()
            .find(|a| a.name() == name)
            .map(|a| a.as_ref())
            .ok_or_else(|| Error::UnknownAlgorithm(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.algorithms.iter().map(|a| a.name()).collect()
    }
}

use std::path::PathBuf;

use thiserror::Error;

use crate::graph::Edge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge {0} does not cross the bipartition")]
    NotCrossing(Edge),

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("edge stream needs at least one edge")]
    EmptyStream,

    #[error("segment fraction out of range: [{start}, {end}]")]
    FractionOutOfRange { start: f64, end: f64 },

    #[error("single-pass violation: segment starts at {requested} but the cursor is at {cursor}")]
    SinglePassViolation { requested: usize, cursor: usize },

    #[error("segment [{lo}, {hi}] does not fit a stream of length {m}")]
    SegmentOutOfRange { lo: usize, hi: usize, m: usize },

    #[error("cannot release {requested} edges, only {stored} stored")]
    MeterUnderflow { requested: usize, stored: usize },

    #[error("invalid augmenting path: {0}")]
    InvalidAugPath(String),

    #[error("augmenting paths are not vertex-disjoint (vertex {0} reused)")]
    OverlappingPaths(usize),

    #[error("wing contract violated: {0}")]
    WingContract(String),

    #[error("symmetric difference is not a matching at vertex {0}")]
    NotAMatching(usize),

    #[error("brute-force oracle refuses {0} vertices (limit {limit})", limit = crate::exact::BRUTEFORCE_VERTEX_LIMIT)]
    TooLarge(usize),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("invalid instance spec `{0}`")]
    InvalidInstance(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

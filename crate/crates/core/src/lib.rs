//! Semi-streaming maximum matching over random-order edge streams.
//!
//! The crate provides one-pass matching pipelines for bipartite and general
//! graphs, exact offline oracles to score them, instance generators and an
//! experiment harness.

pub mod augmenter;
pub mod augmenting;
pub mod augpath;
pub mod bench;
pub mod error;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod greedy;
pub mod matching;
pub mod pipeline;
pub mod registry;
pub mod stream;

pub use augmenter::{Augmenter, AugmenterParams, Barg, Farg, Preset};
pub use bench::{emit, run, ExperimentConfig, Format, InstanceSpec, RunReport};
pub use error::{Error, Result};
pub use graph::{Bipartition, Edge, Graph, Side, VertexId};
pub use matching::Matching;
pub use registry::{MatchingAlgorithm, Registry};
pub use stream::{EdgeStream, MemoryMeter, Segment};

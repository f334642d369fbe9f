//! Synthetic directed social networks driven by semantic homophily.
//!
//! The crate generates follower graphs in three stages (attribute
//! sampling, projection into a weighted homophily space, and link
//! formation via local affinity, triadic closure and long-range
//! exploration) and ships the evaluation toolkit used to validate them:
//! the five-metric structural fingerprint, NED scoring against reference
//! values, grid-search calibration, and the standard family of
//! structure-preserving graph samplers for baseline comparison.
//!
//! Start with the runnable examples (`cargo run --release --example
//! generate`) or the `homonet` binary, which exposes the same pipeline as
//! subcommands.

pub mod attrgen;
pub mod calibrate;
pub mod cli;
pub mod config;
pub mod error;
pub mod graph;
pub mod linkgen;
pub mod netmetrics;
pub mod pipeline;
pub mod rng;
pub mod sampling;
pub mod semspace;

pub use attrgen::NodeProfile;
pub use config::{Catalogs, GeneratorConfig};
pub use error::{Error, Result};
pub use graph::DirectedGraph;
pub use linkgen::{RawHyperParams, ResolvedHyperParams};
pub use netmetrics::{FiveMetrics, MetricsReport, ReferenceTargets};
pub use pipeline::Pipeline;
pub use semspace::{ProjectionMatrix, SemanticMap, SpatialIndex};

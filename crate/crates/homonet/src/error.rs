//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: invalid TOML: {message}")]
    Toml { path: PathBuf, message: String },

    #[error("{path}: invalid JSON record: {message}")]
    Json { path: PathBuf, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown label {label:?} for node {node}")]
    UnknownLabel { label: String, node: usize },

    #[error("duplicate label {0:?} in semantic ordering")]
    DuplicateLabel(String),

    #[error("similarity table must be square and symmetric with unit diagonal")]
    BadSimilarityTable,

    #[error("{path}:{line}: malformed edge line")]
    MalformedEdge { path: PathBuf, line: usize },

    #[error("need at least 2 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("graph has no edges; {0} is undefined")]
    EmptyGraph(&'static str),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("age {0} outside every configured interval")]
    AgeOutOfRange(u32),

    #[error("sample target {target} exceeds source node count {available}")]
    TargetTooLarge { target: usize, available: usize },

    #[error("sampler exhausted its step budget before reaching the target size")]
    SamplerStuck,

    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),

    #[error("metrics report contains undefined values")]
    UndefinedMetrics,

    #[error("{0}")]
    Cli(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

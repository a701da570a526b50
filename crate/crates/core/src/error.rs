use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("topology needs at least two layers and every layer size must be >= 1")]
    BadTopology,

    #[error("init scale must lie strictly inside (0, 1), got {0}")]
    BadInitScale(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("input list is empty")]
    EmptyList,

    #[error("learning rate must be positive, got {0}")]
    BadLearningRate(f64),

    #[error("finite-difference step must lie in (0, 1e-3], got {0}")]
    BadStep(f64),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("{path}:{line}: {msg}")]
    MalformedRow {
        path: String,
        line: u64,
        msg: String,
    },

    #[error("{path}: expected {expected} {what}, found {found}")]
    SchemaMismatch {
        path: String,
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Data(String),
}

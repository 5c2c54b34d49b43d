use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("graph must have at least one node")]
    EmptyGraph,

    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: u64, n: usize },

    #[error("{0} is not a power of two")]
    NotPowerOfTwo(u64),

    #[error("diameter {diameter} must exceed 4*log2(n) = {min}")]
    DiameterTooSmall { diameter: u64, min: u64 },

    #[error("expected degree n*p = {0} must exceed 1")]
    DegreeTooSmall(f64),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported format header {found:?}, expected {expected:?}")]
    VersionMismatch { expected: String, found: String },

    #[error("no traces to summarize")]
    EmptyInput,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

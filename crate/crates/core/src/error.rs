use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty-set density undefined")]
    EmptySet,

    #[error("node id {id} out of range for graph with {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid edge weight {weight} on ({u}, {v})")]
    InvalidWeight { u: usize, v: usize, weight: f64 },

    #[error("eigensolver did not converge in {iterations} iterations (best relative residual {best_residual:e})")]
    NoConvergence { iterations: usize, best_residual: f64 },

    #[error("instance too large for oracle: n = {n} exceeds cap {cap}")]
    OracleTooLarge { n: usize, cap: usize },

    #[error("malformed flow network: {0}")]
    MalformedNetwork(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown label value {0:?}")]
    UnknownLabel(String),

    #[error("instance generation failed: {0}")]
    Generation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unconstrained optimum density is zero, normalized density undefined")]
    ZeroOptimum,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}

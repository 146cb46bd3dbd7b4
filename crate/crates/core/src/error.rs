use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty vertex set where a nonempty one is required ({0})")]
    EmptySet(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("{what} of size {size} exceeds the exact limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("refused: estimated {estimate:.3e} operations exceeds budget {budget:.3e} ({what})")]
    Budget {
        what: &'static str,
        estimate: f64,
        budget: f64,
    },

    #[error("non-finite weight at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("graph is not simple: weight {weight} at ({row}, {col}) lies outside [0, 1]")]
    NotSimple { row: usize, col: usize, weight: f64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("fixed-step decomposition stalled: no energy improvement in {0} consecutive steps")]
    Stalled(usize),

    #[error("witness recovery failed: {0}")]
    WitnessRecovery(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

//! Error type shared by every module of the crate.

/// Crate-wide error enum. Every fallible operation is explicit about what
/// went wrong; there are no NaN-like poisoned values anywhere.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("chart mismatch: {0} vs {1}")]
    ChartMismatch(String, String),

    #[error("division by the zero scalar field")]
    DivisionByZero,

    #[error("pole at sample point ({0})")]
    PoleAtSample(String),

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("valence ({0},{1}) not supported here")]
    UnsupportedValence(usize, usize),

    #[error("rank inconsistency: {0}")]
    RankInconsistency(String),

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {}", .0.join("; "))]
    InvalidInput(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors produced across the library. Variants map onto the distinct
/// failure classes of the mathematical contracts: bad data, violated
/// hypotheses, and numerical degeneracies.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("stability violation: {0}")]
    Stability(String),

    #[error("numerically singular matrix: {0}")]
    Singular(String),

    #[error("Loewner ordering violation: {0}")]
    Ordering(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("properness violation: {0}")]
    Properness(String),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

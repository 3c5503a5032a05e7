use thiserror::Error;

/// Errors raised by the evaluators, bounds and frontier engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("simplex sum {sum} is outside [1 - 1e-9, 1 + 1e-9]")]
    SimplexSum { sum: f64 },

    #[error("simplex weight {value} at index {index} is negative")]
    NegativeWeight { index: usize, value: f64 },

    #[error("I + M is not positive definite (det = {det})")]
    NonPositiveDefinite { det: f64 },

    #[error("matrix is singular (|det| = {det})")]
    Singular { det: f64 },

    #[error("negative SNR {0}")]
    NegativeSnr(f64),

    #[error("{0} is infinite; use the limit-mode evaluator")]
    InfiniteGain(&'static str),

    #[error("{0} is finite; limit mode requires an infinite cooperation gain")]
    NotInfinite(&'static str),

    #[error("phase {0} has zero duration")]
    DegeneratePhase(usize),

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("channel is not in the strong-interference regime (need c14 >= c13 and c23 >= c24)")]
    NotStrongInterference,
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by constructors, operations, and the solver.
#[derive(Debug, Error)]
pub enum Error {
    /// A tensor or matrix was built with inconsistent or empty dimensions.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A probability constraint was violated at construction time.
    /// Inputs outside tolerance are rejected, not renormalized.
    #[error("invalid probabilities in {context}: {detail}")]
    InvalidProbabilities { context: &'static str, detail: String },

    /// A loss matrix contained a non-finite entry or was not square.
    #[error("invalid loss matrix: {0}")]
    InvalidLoss(String),

    /// An index argument referred past the end of its axis.
    #[error("{axis} index {index} out of range (size {size})")]
    IndexOutOfRange {
        axis: &'static str,
        index: usize,
        size: usize,
    },

    /// Constructing a learning source would enumerate too many outcomes.
    #[error("learning source would need {required} outcomes, exceeding the budget of {budget}")]
    OutcomeBudget { required: u128, budget: usize },

    /// A discretization grid does not cover mean +/- 4 sigma for some model.
    #[error(
        "grid [{lower}, {upper}] does not cover mean {mean} +/- 4 required by model index {model}"
    )]
    InsufficientCoverage {
        lower: f64,
        upper: f64,
        mean: f64,
        model: usize,
    },

    /// A learning sample was empty where at least one observation is required.
    #[error("empty sample: {0}")]
    EmptySample(&'static str),

    /// Every model assigns probability zero to the observed sample.
    #[error("sample impossible under every model")]
    ImpossibleSample,

    /// A solver or experiment configuration failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An exhaustive oracle was asked to search past its size gate.
    #[error("oracle bound exceeded: {0}")]
    OracleBound(String),

    /// A serialized artifact could not be decoded into a valid value.
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;

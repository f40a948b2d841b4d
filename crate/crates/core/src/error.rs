//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violated its admissible range; names the offending field.
    #[error("invalid parameter `{field}` = {value}: must satisfy {constraint}")]
    InvalidParam {
        field: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// A region is geometrically invalid for the given parameters.
    #[error("invalid region: {0}")]
    InvalidRegion(String),

    /// A function argument outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A series could not be truncated within the configured safety cap.
    #[error("truncation failure: {0}")]
    TruncationFailure(String),

    /// Numerical quadrature could not reach the requested accuracy.
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    /// Empty input data where at least one observation is required.
    #[error("empty input data")]
    EmptyData,

    /// The minimizer could not make progress.
    #[error("optimizer failed: {0}")]
    OptimizerFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

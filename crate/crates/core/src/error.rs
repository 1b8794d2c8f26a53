use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected} samples, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A homogeneous norm of negative order was requested for a field whose
    /// zero mode is nonzero; the continuum value is infinite.
    #[error("infinite norm: {0}")]
    InfiniteNorm(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

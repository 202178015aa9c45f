use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("expected {expected} initial values, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("imaginary part of the locus has no sign change on (0, pi) for a = {a}")]
    RootNotFound { a: f64 },

    #[error("point lies {distance:e} from the boundary curve, inside the margin {eps:e}")]
    OnBoundary { distance: f64, eps: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

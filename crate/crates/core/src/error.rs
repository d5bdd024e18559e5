use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index {index} exceeds gamma table cap {cap}")]
    IndexOutOfRange { index: usize, cap: usize },

    #[error("invalid Appell family: {0}")]
    InvalidFamily(String),

    #[error("series did not converge within {terms} terms ({what})")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("truncation cap {k_cap} exhausted at x = {x}: accumulated mass {mass} < 1 - {eps}")]
    Truncation { x: f64, k_cap: usize, mass: f64, eps: f64 },

    #[error("tridiagonal eigensolver did not converge (alpha = {alpha}, order = {order})")]
    EigenSolver { alpha: f64, order: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}

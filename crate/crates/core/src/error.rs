use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of a special function or recursion.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed caller input (bad label, dimension mismatch, violated precondition).
    #[error("input error: {0}")]
    Input(String),

    /// A numerical routine failed; `partial` carries the last value reached, if any.
    #[error("numeric error: {message}")]
    Numeric { message: String, partial: Option<f64> },

    /// An extrapolation did not settle within its iteration budget.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// A zero pivot appeared while back-solving the coefficient system.
    #[error("singular pivot at k={k}, q={q}")]
    Singular { k: usize, q: usize },

    /// An exact enumeration would exceed the configured term cap.
    #[error("enumeration of {needed} terms exceeds cap {cap}")]
    Resource { needed: u128, cap: u128 },

    /// Coefficients used by kernel extraction did not pass validation.
    #[error("unvalidated coefficients: {0}")]
    Unvalidated(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

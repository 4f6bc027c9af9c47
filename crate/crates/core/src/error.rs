use thiserror::Error;

/// Errors produced by the numerical and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Quadrature ran out of refinement levels. Carries the best estimate.
    #[error("quadrature did not converge: estimate {value} (abs err est {abs_err_est})")]
    NoConvergence { value: f64, abs_err_est: f64 },

    /// Geometric input is degenerate (collinear, coplanar, coincident).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Failed to parse an exact value.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure_domain {
    ($cond:expr, $($arg:tt)+) => {
        if !($cond) {
            return Err($crate::error::Error::Domain(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure_domain;

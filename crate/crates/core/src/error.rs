use thiserror::Error;

use crate::moments::Method;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid chiral vector ({p},{q}): {reason}")]
    InvalidChiral { p: u32, q: u32, reason: &'static str },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("moment mismatch at k={k}: {method_a:?} gives {value_a}, {method_b:?} gives {value_b}")]
    MomentMismatch {
        k: usize,
        method_a: Method,
        value_a: String,
        method_b: Method,
        value_b: String,
    },

    /// The exact rational total of the binomial-ratio formula was not an
    /// integer. This can only happen through an implementation bug.
    #[error("non-integral moment total at k={k}: {value}")]
    NonIntegralMoment { k: usize, value: String },

    #[error("method {method:?} is not applicable to {target}")]
    MethodNotApplicable { method: Method, target: String },

    #[error("no convergence: estimate {estimate} with error {error} (tolerance {tolerance})")]
    NoConvergence {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("extremum detection failed on [{lo}, {hi}]: {reason}")]
    ExtremumDetectionFailure { lo: f64, hi: f64, reason: String },
}

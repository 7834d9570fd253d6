use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by parameter validation, factorization and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A coefficient violates the domain required by the travelling-wave reduction.
    #[error("parameter domain error: {0}")]
    ParamDomain(String),

    #[error("compound factorization requires q ≠ 0")]
    CompoundRequiresNonzeroQ,

    /// Inputs that are mathematically meaningful but deliberately not supported
    /// (imaginary factorization coefficients, oscillatory Δ² < 0 families).
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    /// Evaluation hit a singularity of the closed form. The location is given
    /// in the coordinate of the evaluator that raised it (θ or ξ).
    #[error("pole at {}{:+}i", location.re, location.im)]
    Pole { location: Complex64 },

    /// Malformed request (empty grid, bad range, non-positive step, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

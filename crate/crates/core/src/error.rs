//! Shared error type for the library.

use thiserror::Error;

/// Errors surfaced by matrix construction, functional calculus, scalar
/// function evaluation, and suite dispatch.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix failed a structural validation (non-finite entry,
    /// asymmetry beyond tolerance, bad dimension).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    /// Two operands have incompatible dimensions.
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    /// The Jacobi eigensolver did not converge within its sweep budget.
    #[error("eigensolver failed to converge within {sweeps} sweeps (off-diagonal mass {offdiag:e})")]
    NonConvergence { sweeps: usize, offdiag: f64 },

    /// An input lies outside the domain of the requested operation
    /// (negative eigenvalue for a square root, singular matrix for an
    /// inverse, scalar argument outside `(0, ∞)`, …).
    #[error("domain violation: {0}")]
    DomainViolation(String),

    /// A support (range) inclusion required by a singular-limit
    /// operation fails beyond tolerance.
    #[error("support violation: {0}")]
    SupportViolation(String),

    /// Numeric inversion failed to bracket its target value.
    #[error("inverse not bracketed: {0}")]
    InverseNotBracketed(String),

    /// Unknown check id passed to the suite dispatcher.
    #[error("unknown check id: {0}")]
    UnknownCheckId(String),

    /// A descriptor string could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

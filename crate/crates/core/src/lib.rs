//! Dense real symmetric matrix analysis library.
//!
//! The crate provides:
//!
//! * [`matcore`] — a dense symmetric matrix type with a cyclic-Jacobi
//!   eigensolver and Hermitian functional calculus;
//! * [`funclib`] — a symbolic catalog of positive scalar functions on
//!   `(0, ∞)` closed under the transpose / adjoint / dual transforms,
//!   with sampled classifiers (power monotonicity, geometric convexity,
//!   operator monotonicity on random low-dimensional pairs);
//! * [`perspective`] — operator perspectives `P_f(A,B) =
//!   B^{1/2} f(B^{-1/2} A B^{-1/2}) B^{1/2}`, operator means, weighted
//!   geometric and Log-Euclidean means, the generalized Kantorovich
//!   constant, and singular (positive semidefinite) extensions;
//! * [`majorization`] — eigenvalue-product orderings (weak
//!   log-majorization and friends);
//! * [`randgen`] — deterministic seeded matrix generators with
//!   controlled spectra and supports;
//! * [`suite`] — the registry of executable inequality checks, the
//!   adversarial exponent-region scanner, and witness replay;
//! * [`report`] — JSON report aggregation for the CLI.
//!
//! Everything is pure and deterministic: identical inputs (including
//! seeds) produce bit-identical outputs on every platform.

pub mod error;
pub mod funclib;
pub mod majorization;
pub mod matcore;
pub mod perspective;
pub mod randgen;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
pub use matcore::SymMatrix;

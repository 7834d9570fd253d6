//! Travelling-wave solutions of the Korteweg-de Vries–Burgers equation
//!
//! ```text
//! u_t = s u_xxx − μ u_xx − α u u_x − β u² u_x
//! ```
//!
//! (standard KdVB for `β = 0`, compound KdVB otherwise) obtained by factorizing
//! the reduced second-order travelling-wave ODE into a pair of first-order
//! operators.
//!
//! - [`params`]: coefficient model and the reduction to `w(θ)`.
//! - [`factorizer`]: factorization coefficients and their compatibility checks.
//! - [`solutions`]: closed-form families in reduced and physical variables.
//! - [`verify`]: residuals, Runge–Kutta oracles and the rational-form audit.
//! - [`cli`]: the `kdvb` command-line front end.

pub mod cli;
pub mod error;
pub mod factorizer;
pub mod params;
pub mod solutions;
pub mod verify;

pub use error::{Error, Result};
pub use factorizer::Branch;
pub use params::{PhysicalParams, ReducedParams};
pub use solutions::{Family, WaveSolution};

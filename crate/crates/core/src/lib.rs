//! Numerics for real-symmetric meromorphic functions on the upper half-plane:
//! factorization, reproducing kernels, difference-quotient models and index counts.
//!
//! * [`funclib`]: polynomials, rational functions, root finding.
//! * [`halfplane`]: Blaschke, singular inner, outer and Herglotz evaluators.
//! * [`factorization`]: inner–outer splitting and the coprime pair
//!   decomposition `f = i(h₂ − h₁)/(h₂ + h₁)`.
//! * [`kernels`]: Nevanlinna and Schur kernels, Gram inertia, finite
//!   compressions of the difference-quotient operator, identity verifiers.
//! * [`spectral`]: upper half-plane root counting, negative index
//!   estimation, Stieltjes inversion, real-axis obstruction scans.

pub mod error;
pub mod factorization;
pub mod funclib;
pub mod halfplane;
pub mod kernels;
pub mod report;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;

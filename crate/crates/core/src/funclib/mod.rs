//! Polynomials, rational functions and root finding.

mod polynomial;
mod rational;
mod roots;

pub use polynomial::Polynomial;
pub use rational::{cayley_rational, check_nsym_symmetry, eval_rational, RationalFunction, POLE_TOL};
pub use roots::{poly_roots, RootSet, CLUSTER_TOL};

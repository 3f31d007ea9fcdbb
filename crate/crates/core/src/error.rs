use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at (or numerically at) a pole.
    #[error("pole at {at} (nearest pole {pole})")]
    Pole { at: Complex64, pole: Complex64 },

    /// Evaluation at a point where a singular inner factor has an atom.
    #[error("singularity at {0}")]
    Singularity(Complex64),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature failed to converge: estimated error {estimate:e} after {subdivisions} subdivisions")]
    Quadrature { estimate: f64, subdivisions: usize },

    /// Iterative method did not converge or produced a non-finite value.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Argument-principle contour passes too close to a root.
    #[error("contour error: {0}")]
    Contour(String),

    /// A Gram system was too singular to solve for the requested column.
    #[error("rank error: {0}")]
    Rank(String),

    /// Kernel evaluation failed at a specific pair of points.
    #[error("kernel evaluation at ({zeta}, {w}) failed: {source}")]
    Kernel { zeta: Complex64, w: Complex64, source: Box<Error> },

    /// A formula whose denominator nearly vanishes.
    #[error("conditioning error: {0}")]
    Conditioning(String),
}

pub type Result<T> = std::result::Result<T, Error>;

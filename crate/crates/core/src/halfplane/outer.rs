use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Density, Holomorphic, QuadratureConfig};
use crate::error::{Error, Result};

/// Outer function with boundary log-modulus `log_density` on ℂ⁺.
#[derive(Debug, Clone)]
pub struct OuterFunction {
    log_density: Density,
    quad: QuadratureConfig,
    weighted_l1: f64,
}

impl OuterFunction {
    /// Validates `∫ |log_density| dt / (1 + t²) < ∞` numerically.
    pub fn new(log_density: Density, quad: QuadratureConfig) -> Result<Self> {
        let weighted_l1 = log_density.weighted_l1(&quad)?;
        Ok(Self { log_density, quad, weighted_l1 })
    }

    pub fn log_density(&self) -> &Density {
        &self.log_density
    }

    pub fn quad(&self) -> &QuadratureConfig {
        &self.quad
    }

    /// Whether integrability against `dt/(1+t²)` was established.
    pub fn integrability_checked(&self) -> bool {
        self.weighted_l1.is_finite()
    }

    /// `(−i/π) ∫ (1/(t − ζ) − t/(1 + t²)) log_density(t) dt`.
    fn exponent(&self, z: Complex64) -> Result<Complex64> {
        let r = self
            .log_density
            .integrate(|t| (1.0 + z * t) / (t - z), &[z.re], &self.quad)?;
        Ok(Complex64::new(0.0, -1.0 / PI) * r.value)
    }

    /// Poisson extension of the boundary data, `(y/π) ∫ L(t) / ((t−x)² + y²) dt`;
    /// equals `log |F(x + iy)|`.
    pub fn poisson_extension(&self, z: Complex64) -> Result<f64> {
        if !(z.im > 0.0) {
            return Err(Error::Domain(format!("Poisson extension needs Im ζ > 0, got {z}")));
        }
        let (x, y) = (z.re, z.im);
        let r = self.log_density.integrate(
            |t| Complex64::new(y / PI * (1.0 + t * t) / ((t - x) * (t - x) + y * y), 0.0),
            &[x],
            &self.quad,
        )?;
        Ok(r.value.re)
    }
}

/// Value of the outer function at `z ∈ ℂ⁺`.
pub fn eval_outer(f: &OuterFunction, z: Complex64) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("outer function evaluated off ℂ⁺ at {z}")));
    }
    Ok(f.exponent(z)?.exp())
}

impl Holomorphic for OuterFunction {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        eval_outer(self, z)
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let value = eval_outer(self, z)?;
        let r = self
            .log_density
            .integrate(|t| (1.0 + t * t) / ((t - z) * (t - z)), &[z.re], &self.quad)?;
        Ok(value * Complex64::new(0.0, -1.0 / PI) * r.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_density_gives_one() {
        let f = OuterFunction::new(Density::constant(0.0), QuadratureConfig::default()).unwrap();
        assert!((eval_outer(&f, c(0.3, 0.5)).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn constant_log_two_gives_two() {
        let f = OuterFunction::new(Density::constant(2f64.ln()), QuadratureConfig::default()).unwrap();
        for z in [c(0.0, 1.0), c(3.0, 0.1), c(-2.0, 10.0)] {
            assert!((eval_outer(&f, z).unwrap() - 2.0).norm() < 1e-8, "{z}");
        }
    }

    #[test]
    fn rational_modulus_matches_closed_form() {
        let i = c(0.0, 1.0);
        let one = c(1.0, 0.0);
        let d = Density::log_rational_modulus(&[i, one], &[i * 2.0, one]).unwrap();
        let f = OuterFunction::new(d, QuadratureConfig::default()).unwrap();
        assert!((eval_outer(&f, i).unwrap().norm() - 2.0 / 3.0).abs() < 1e-8);
        // phase is fixed up to a unimodular constant: compare ratios
        let z = c(0.5, 0.7);
        let ratio = eval_outer(&f, z).unwrap() / ((z + i) / (z + i * 2.0));
        let ratio_i = eval_outer(&f, i).unwrap() / (c(2.0, 0.0) / 3.0);
        assert!((ratio - ratio_i).norm() < 1e-8);
    }

    #[test]
    fn lower_half_plane_rejected() {
        let f = OuterFunction::new(Density::constant(0.0), QuadratureConfig::default()).unwrap();
        assert!(eval_outer(&f, c(0.0, -1.0)).is_err());
    }

    #[test]
    fn modulus_is_poisson_extension() {
        let d = Density::bump(-1.0, 2.0, -0.8).unwrap();
        let f = OuterFunction::new(d, QuadratureConfig::default()).unwrap();
        for y in [0.1, 1.0, 10.0] {
            let z = c(0.4, y);
            let lhs = eval_outer(&f, z).unwrap().norm().ln();
            let rhs = f.poisson_extension(z).unwrap();
            assert!((lhs - rhs).abs() < 1e-9, "y = {y}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn derivative_matches_cauchy() {
        let d = Density::bump(-1.0, 2.0, -0.8).unwrap();
        let f = OuterFunction::new(d, QuadratureConfig::default()).unwrap();
        let z = c(0.4, 0.8);
        let exact = f.derivative(z).unwrap();
        let cauchy = super::super::cauchy_derivative(&f, z, 1).unwrap();
        assert!((exact - cauchy).norm() < 1e-8);
    }
}

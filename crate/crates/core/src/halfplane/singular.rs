use std::f64::consts::PI;

use num_complex::Complex64;

use super::Holomorphic;
use crate::error::{Error, Result};

/// Singular inner factor with point masses on ℝ and an `exp(iαζ)` part.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SingularInner {
    atoms: Vec<(f64, f64)>,
    alpha: f64,
}

impl SingularInner {
    pub fn new(atoms: Vec<(f64, f64)>, alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) {
            return Err(Error::Domain(format!("exponential coefficient {alpha} must be nonnegative")));
        }
        for (k, &(t, m)) in atoms.iter().enumerate() {
            if !(m > 0.0) || !t.is_finite() {
                return Err(Error::Domain(format!("atom ({t}, {m}) needs a positive mass")));
            }
            if atoms[k + 1..].iter().any(|&(s, _)| s == t) {
                return Err(Error::Domain(format!("duplicate atom location {t}")));
            }
        }
        Ok(Self { atoms, alpha })
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_trivial(&self) -> bool {
        self.atoms.is_empty() && self.alpha == 0.0
    }

    fn exponent(&self, z: Complex64) -> Result<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for &(t, m) in &self.atoms {
            if (z - t).norm() < 1e-12 * (1.0 + t.abs()) {
                return Err(Error::Singularity(z));
            }
            sum += (1.0 / (t - z) - t / (1.0 + t * t)) * m;
        }
        Ok(i / PI * sum + i * self.alpha * z)
    }
}

/// `exp((i/π) Σ m_j (1/(t_j − ζ) − t_j/(1 + t_j²))) · exp(iαζ)`.
///
/// The formula continues analytically to ℂ⁻ where it coincides with the
/// S₀ extension `1 / conj(S(conj ζ))`.
pub fn eval_singular(s: &SingularInner, z: Complex64) -> Result<Complex64> {
    Ok(s.exponent(z)?.exp())
}

impl Holomorphic for SingularInner {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        eval_singular(self, z)
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        let log_deriv: Complex64 = self
            .atoms
            .iter()
            .map(|&(t, m)| m / ((t - z) * (t - z)))
            .sum::<Complex64>()
            * (i / PI)
            + i * self.alpha;
        Ok(eval_singular(self, z)? * log_deriv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn examples() {
        let one = SingularInner::trivial();
        assert_eq!(eval_singular(&one, c(0.3, 2.0)).unwrap(), c(1.0, 0.0));
        let exp = SingularInner::new(vec![], 1.0).unwrap();
        assert!((eval_singular(&exp, c(0.0, 1.0)).unwrap() - c((-1f64).exp(), 0.0)).norm() < 1e-15);
        let atom = SingularInner::new(vec![(0.0, PI)], 0.0).unwrap();
        assert!((eval_singular(&atom, c(0.0, 1.0)).unwrap() - c((-1f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn atom_location_is_singular() {
        let s = SingularInner::new(vec![(0.5, 1.0)], 0.0).unwrap();
        assert!(matches!(eval_singular(&s, c(0.5, 0.0)), Err(Error::Singularity(_))));
    }

    #[test]
    fn lower_half_plane_is_reciprocal_reflection() {
        let s = SingularInner::new(vec![(0.5, 1.0), (-2.0, 0.3)], 0.7).unwrap();
        let z = c(0.4, 1.3);
        let up = eval_singular(&s, z).unwrap();
        let down = eval_singular(&s, z.conj()).unwrap();
        assert!((down * up.conj() - 1.0).norm() < 1e-13);
        assert!(up.norm() <= 1.0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(SingularInner::new(vec![(0.0, -1.0)], 0.0).is_err());
        assert!(SingularInner::new(vec![], -1.0).is_err());
        assert!(SingularInner::new(vec![(1.0, 1.0), (1.0, 2.0)], 0.0).is_err());
    }
}

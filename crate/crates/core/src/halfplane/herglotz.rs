use num_complex::Complex64;

use super::{Density, Holomorphic, QuadratureConfig};
use crate::error::{Error, Result};

/// `q(ζ) = a + bζ + ∫ (1/(t − ζ) − t/(1 + t²)) dν(t)` with `ν` a finite sum of
/// atoms plus an absolutely continuous part.
#[derive(Debug, Clone)]
pub struct HerglotzRepresentation {
    a: f64,
    b: f64,
    atoms: Vec<(f64, f64)>,
    density: Option<Density>,
    quad: QuadratureConfig,
}

impl HerglotzRepresentation {
    pub fn new(
        a: f64,
        b: f64,
        atoms: Vec<(f64, f64)>,
        density: Option<Density>,
        quad: QuadratureConfig,
    ) -> Result<Self> {
        if !a.is_finite() || !(b >= 0.0) {
            return Err(Error::Domain(format!("need real a and b ≥ 0, got a = {a}, b = {b}")));
        }
        if let Some(&(t, w)) = atoms.iter().find(|(t, w)| !(*w > 0.0) || !t.is_finite()) {
            return Err(Error::Domain(format!("atom ({t}, {w}) needs a positive weight")));
        }
        if let Some(d) = &density {
            if let Some(t) = d.sample_grid(512).into_iter().find(|&t| d.eval(t) < 0.0) {
                return Err(Error::Domain(format!("density {} is negative at {t}", d.name())));
            }
            d.weighted_l1(&quad)?;
        }
        Ok(Self { a, b, atoms, density, quad })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&Density> {
        self.density.as_ref()
    }
}

/// Value of the representation at a non-real point.
pub fn eval_herglotz(q: &HerglotzRepresentation, z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        return Err(Error::Domain(format!("Herglotz representation evaluated on ℝ at {z}")));
    }
    let mut value = Complex64::new(q.a, 0.0) + z * q.b;
    for &(t, w) in &q.atoms {
        value += (1.0 / (t - z) - t / (1.0 + t * t)) * w;
    }
    if let Some(d) = &q.density {
        value += d.integrate(|t| (1.0 + z * t) / (t - z), &[z.re], &q.quad)?.value;
    }
    Ok(value)
}

impl Holomorphic for HerglotzRepresentation {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        eval_herglotz(self, z)
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 {
            return Err(Error::Domain(format!("Herglotz derivative on ℝ at {z}")));
        }
        let mut value = Complex64::new(self.b, 0.0);
        for &(t, w) in &self.atoms {
            value += w / ((t - z) * (t - z));
        }
        if let Some(d) = &self.density {
            value += d
                .integrate(|t| (1.0 + t * t) / ((t - z) * (t - z)), &[z.re], &self.quad)?
                .value;
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_term() {
        let q = HerglotzRepresentation::new(0.0, 1.0, vec![], None, QuadratureConfig::default()).unwrap();
        assert_eq!(eval_herglotz(&q, c(2.0, 3.0)).unwrap(), c(2.0, 3.0));
    }

    #[test]
    fn atom_at_zero() {
        let q = HerglotzRepresentation::new(0.0, 0.0, vec![(0.0, 1.0)], None, QuadratureConfig::default()).unwrap();
        assert!((eval_herglotz(&q, c(0.0, 1.0)).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn constant_density_over_pi_gives_i() {
        let d = Density::constant(1.0 / std::f64::consts::PI);
        let q = HerglotzRepresentation::new(0.0, 0.0, vec![], Some(d), QuadratureConfig::default()).unwrap();
        for y in [0.5, 2.0, 10.0] {
            assert!((eval_herglotz(&q, c(0.0, y)).unwrap() - c(0.0, 1.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn real_argument_rejected() {
        let q = HerglotzRepresentation::new(0.0, 1.0, vec![], None, QuadratureConfig::default()).unwrap();
        assert!(matches!(eval_herglotz(&q, c(1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn invalid_parameters() {
        let cfg = QuadratureConfig::default();
        assert!(HerglotzRepresentation::new(0.0, -1.0, vec![], None, cfg).is_err());
        assert!(HerglotzRepresentation::new(0.0, 0.0, vec![(0.0, 0.0)], None, cfg).is_err());
        let neg = Density::boxed(0.0, 1.0, -1.0).unwrap();
        assert!(HerglotzRepresentation::new(0.0, 0.0, vec![], Some(neg), cfg).is_err());
    }

    #[test]
    fn derivative_matches_cauchy() {
        let d = Density::boxed(-1.0, 2.0, 0.7).unwrap();
        let q = HerglotzRepresentation::new(0.3, 0.5, vec![(1.0, 0.2)], Some(d), QuadratureConfig::default()).unwrap();
        let z = c(0.1, 0.9);
        let cauchy = super::super::cauchy_derivative(&q, z, 1).unwrap();
        assert!((q.derivative(z).unwrap() - cauchy).norm() < 1e-8);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn positive_and_symmetric(
            a in -2.0..2.0f64,
            b in 0.0..2.0f64,
            atoms in prop::collection::vec((-3.0..3.0f64, 0.01..2.0f64), 0..=3),
            lo in -3.0..0.0f64,
            width in 0.1..3.0f64,
            height in 0.0..2.0f64,
            x in -4.0..4.0f64,
            y in 0.05..5.0f64,
        ) {
            let d = Density::boxed(lo, lo + width, height).unwrap();
            let q = HerglotzRepresentation::new(a, b, atoms, Some(d), QuadratureConfig::default()).unwrap();
            let z = c(x, y);
            let up = eval_herglotz(&q, z).unwrap();
            let down = eval_herglotz(&q, z.conj()).unwrap();
            prop_assert!(up.im >= -1e-9);
            prop_assert!((down - up.conj()).norm() < 1e-9 * (1.0 + up.norm()));
        }
    }
}

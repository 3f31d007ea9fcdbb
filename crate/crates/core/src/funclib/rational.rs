use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{poly_roots, Polynomial, RootSet};
use crate::error::{Error, Result};

/// Relative distance at which a numerator root cancels a denominator root.
const CANCEL_TOL: f64 = 1e-7;
/// Proximity at which evaluation is refused as a pole.
pub const POLE_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-12;
const ROOT_TOL: f64 = 1e-6;

/// Quotient of complex polynomials, reduced and with a monic denominator.
#[derive(Debug, Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
    poles: RootSet,
    real_symmetric: bool,
}

impl RationalFunction {
    /// Builds `num / den`, cancelling common roots numerically and scaling the
    /// denominator to be monic.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("denominator is identically zero".into()));
        }
        let (mut num, mut den) = (num, den);
        let mut poles = poly_roots(&den, ROOT_TOL)?;
        if !num.is_zero() && !poles.is_empty() {
            let zeros = poly_roots(&num, ROOT_TOL)?;
            let mut remaining = Vec::new();
            let mut zero_mults: Vec<(Complex64, usize)> = zeros.iter().copied().collect();
            for &(pole, pm) in poles.iter() {
                let mut left = pm;
                for (z, zm) in zero_mults.iter_mut() {
                    if left > 0 && *zm > 0 && (*z - pole).norm() < CANCEL_TOL * (1.0 + pole.norm()) {
                        let k = left.min(*zm);
                        let r = (*z + pole) * 0.5;
                        for _ in 0..k {
                            num = num.deflate(r);
                            den = den.deflate(r);
                        }
                        left -= k;
                        *zm -= k;
                    }
                }
                if left > 0 {
                    remaining.push((pole, left));
                }
            }
            poles = RootSet::new(remaining)?;
        }
        let lead = den.leading();
        let inv = Complex64::new(1.0, 0.0) / lead;
        let mut num = num.scaled(inv);
        let mut den = den.scaled(inv);
        let real_symmetric = has_real_coefficients(&num, SYMMETRY_TOL)
            && has_real_coefficients(&den, SYMMETRY_TOL);
        if real_symmetric {
            num = num.clean_imaginary(SYMMETRY_TOL);
            den = den.clean_imaginary(SYMMETRY_TOL);
        }
        Ok(Self { num, den, poles, real_symmetric })
    }

    pub fn from_real(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(Polynomial::from_real(num), Polynomial::from_real(den))
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self::new(p, Polynomial::one()).expect("unit denominator is valid")
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(Polynomial::constant(c))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn poles(&self) -> &RootSet {
        &self.poles
    }

    pub fn zeros(&self) -> Result<RootSet> {
        if self.num.is_zero() {
            return Err(Error::Domain("zeros of the zero function".into()));
        }
        poly_roots(&self.num, ROOT_TOL)
    }

    /// Cached coefficient test: all coefficients real after normalization.
    pub fn is_real_symmetric(&self) -> bool {
        self.real_symmetric
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    /// McMillan degree `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    fn check_pole(&self, z: Complex64) -> Result<()> {
        if let Some(p) = self.poles.nearest(z) {
            if (z - p).norm() < POLE_TOL * (1.0 + z.norm()) {
                return Err(Error::Pole { at: z, pole: p });
            }
        }
        Ok(())
    }

    /// Value (`order = 0`), first or second derivative at `z`.
    pub fn eval_order(&self, z: Complex64, order: usize) -> Result<Complex64> {
        self.check_pole(z)?;
        let [p, p1, p2] = self.num.eval_with_derivatives(z);
        let [q, q1, q2] = self.den.eval_with_derivatives(z);
        if q.norm() == 0.0 {
            return Err(Error::Pole { at: z, pole: z });
        }
        let f0 = p / q;
        let value = match order {
            0 => f0,
            1 => (p1 - f0 * q1) / q,
            2 => {
                let f1 = (p1 - f0 * q1) / q;
                (p2 - f1 * q1 * 2.0 - f0 * q2) / q
            }
            _ => return Err(Error::Domain(format!("derivative order {order} not supported"))),
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Pole { at: z, pole: self.poles.nearest(z).unwrap_or(z) })
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

fn has_real_coefficients(p: &Polynomial, tol: f64) -> bool {
    let s = p.scale();
    p.coeffs().iter().all(|c| c.im.abs() <= tol * s.max(f64::MIN_POSITIVE))
}

/// `f(z)` for `order = 0`, `f'(z)` for `order = 1`.
pub fn eval_rational(f: &RationalFunction, z: Complex64, order: usize) -> Result<Complex64> {
    if order > 1 {
        return Err(Error::Domain(format!("derivative order {order} not supported")));
    }
    f.eval_order(z, order)
}

/// Whether `f(conj z) = conj f(z)` identically.
///
/// Decided by the coefficient criterion (a common unimodular factor making
/// every coefficient real within `tol`), then confirmed at eight seeded
/// non-real probe points.
pub fn check_nsym_symmetry(f: &RationalFunction, tol: f64) -> bool {
    let lead = f.den.leading();
    let phase = Complex64::from_polar(1.0, -lead.arg());
    let coefficient_test = has_real_coefficients(&f.num.scaled(phase), tol)
        && has_real_coefficients(&f.den.scaled(phase), tol);
    if !coefficient_test {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    while checked < 8 {
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.2..3.0));
        let (Ok(up), Ok(down)) = (f.eval_order(z, 0), f.eval_order(z.conj(), 0)) else {
            continue;
        };
        if (down - up.conj()).norm() > tol.max(1e-12) * 1e3 * (1.0 + up.norm()) {
            return false;
        }
        checked += 1;
    }
    true
}

/// Cayley transform `(1 + i f) / (1 − i f)` as a rational function.
pub fn cayley_rational(f: &RationalFunction) -> Result<RationalFunction> {
    let i = Complex64::new(0.0, 1.0);
    let ip = f.num.scaled(i);
    let num = f.den() + &ip;
    let den = f.den() - &ip;
    if den.is_zero() {
        return Err(Error::Domain("Cayley transform of f ≡ −i".into()));
    }
    if num.is_zero() {
        return Err(Error::Domain("Cayley transform of f ≡ i".into()));
    }
    RationalFunction::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluation_examples() {
        let zsq = RationalFunction::from_real(&[0.0, 0.0, 1.0], &[1.0]).unwrap();
        assert!((eval_rational(&zsq, c(0.0, 2.0), 0).unwrap() - c(-4.0, 0.0)).norm() < 1e-15);
        assert!((eval_rational(&zsq, c(0.0, 3.0), 1).unwrap() - c(0.0, 6.0)).norm() < 1e-15);
        let b = RationalFunction::new(
            Polynomial::new(vec![c(0.0, -1.0), c(1.0, 0.0)]),
            Polynomial::new(vec![c(0.0, 1.0), c(1.0, 0.0)]),
        )
        .unwrap();
        assert!((eval_rational(&b, c(0.0, 2.0), 0).unwrap() - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pole_error_names_the_pole() {
        let f = RationalFunction::from_real(&[1.0], &[0.0, 1.0]).unwrap();
        match eval_rational(&f, c(0.0, 0.0), 0) {
            Err(Error::Pole { pole, .. }) => assert!(pole.norm() < 1e-14),
            other => panic!("expected pole error, got {other:?}"),
        }
        assert!(eval_rational(&f, c(1e-13, 0.0), 1).is_err());
    }

    #[test]
    fn common_factors_cancel() {
        // (z² − 1)/(z − 1) = z + 1
        let f = RationalFunction::from_real(&[-1.0, 0.0, 1.0], &[-1.0, 1.0]).unwrap();
        assert_eq!(f.den().degree(), Some(0));
        assert!(f.poles().is_empty());
        assert!((f.eval_order(c(1.0, 0.0), 0).unwrap() - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn symmetry_examples() {
        let zsq = RationalFunction::from_real(&[0.0, 0.0, 1.0], &[1.0]).unwrap();
        assert!(check_nsym_symmetry(&zsq, 1e-10));
        let shifted = RationalFunction::polynomial(Polynomial::new(vec![c(0.0, 1.0), c(1.0, 0.0)]));
        assert!(!check_nsym_symmetry(&shifted, 1e-10));
        // (i z) / i
        let common = RationalFunction::new(
            Polynomial::new(vec![c(0.0, 0.0), c(0.0, 1.0)]),
            Polynomial::new(vec![c(0.0, 1.0)]),
        )
        .unwrap();
        assert!(check_nsym_symmetry(&common, 1e-10));
        assert!(common.is_real_symmetric());
    }

    #[test]
    fn second_derivative() {
        let f = RationalFunction::from_real(&[1.0, 0.0, 0.0, 1.0], &[2.0, 1.0]).unwrap();
        let z = c(0.3, 0.8);
        let h = 1e-4;
        let fd = (f.eval_order(z + h, 1).unwrap() - f.eval_order(z - h, 1).unwrap()) / (2.0 * h);
        assert!((fd - f.eval_order(z, 2).unwrap()).norm() < 1e-6);
    }

    #[test]
    fn cayley_of_identity() {
        let z = RationalFunction::from_real(&[0.0, 1.0], &[1.0]).unwrap();
        let g = cayley_rational(&z).unwrap();
        assert!(g.eval_order(c(0.0, 1.0), 0).unwrap().norm() < 1e-15);
    }

    fn off_axis() -> impl Strategy<Value = Complex64> {
        (-3.0..3.0f64, 0.3..3.0f64, any::<bool>())
            .prop_map(|(x, y, up)| c(x, if up { y } else { -y }))
    }

    fn real_rational() -> impl Strategy<Value = RationalFunction> {
        (
            prop::collection::vec(-2.0..2.0f64, 1..5),
            prop::collection::vec(-2.0..2.0f64, 1..4),
        )
            .prop_filter_map("valid rational", |(n, mut d)| {
                let last = d.len() - 1;
                d[last] = if d[last] >= 0.0 { d[last] + 0.5 } else { d[last] - 0.5 };
                RationalFunction::from_real(&n, &d).ok()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn derivative_matches_central_differences(f in real_rational(), z in off_axis()) {
            let h = 1e-6;
            let (Ok(a), Ok(b), Ok(d)) = (f.eval_order(z + h, 0), f.eval_order(z - h, 0), f.eval_order(z, 1)) else {
                return Ok(());
            };
            prop_assume!(f.poles().iter().all(|(p, _)| (p - z).norm() > 0.2));
            let fd = (a - b) / (2.0 * h);
            prop_assert!((fd - d).norm() <= 1e-5 * d.norm().max(1.0));
        }

        #[test]
        fn symmetric_functions_commute_with_conjugation(
            f in real_rational(),
            zs in prop::collection::vec(off_axis(), 20),
        ) {
            prop_assert!(check_nsym_symmetry(&f, 1e-10));
            for z in zs {
                if let (Ok(up), Ok(down)) = (f.eval_order(z, 0), f.eval_order(z.conj(), 0)) {
                    prop_assert!((down - up.conj()).norm() <= 1e-10 * (1.0 + up.norm()));
                }
            }
        }
    }
}

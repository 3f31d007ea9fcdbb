use num_complex::Complex64;

use super::UPPER_TOL;
use crate::error::{Error, Result};
use crate::funclib::{Polynomial, RationalFunction, RootSet};
use crate::halfplane::{certify_bounded, BlaschkeProduct, Holomorphic};
use crate::sampling;

/// `g = front · inner · outer_rational` with the Blaschke product carrying the
/// zeros of `g` in ℂ⁺ and `outer_rational(i) > 0`.
#[derive(Debug, Clone)]
pub struct InnerOuterSplit {
    pub inner: BlaschkeProduct,
    pub outer_rational: RationalFunction,
    pub front: Complex64,
}

impl InnerOuterSplit {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.front * self.inner.value(z)? * self.outer_rational.value(z)?)
    }
}

/// Splits a rational function bounded by one on ℂ⁺.
pub fn inner_outer_split(g: &RationalFunction) -> Result<InnerOuterSplit> {
    if g.num().is_zero() {
        return Err(Error::Domain("inner-outer split of the zero function".into()));
    }
    certify_bounded(g)?;

    let upper_zeros = g.zeros()?.filter(|z| z.im > UPPER_TOL * (1.0 + z.norm()));
    let inner = BlaschkeProduct::new(upper_zeros.clone(), Complex64::new(1.0, 0.0))?;
    let (inner_num, inner_den) = inner.as_polynomials();

    // outer = g / inner = (num / Π(z − a)) · Π(z − ā) / (phase · den)
    let mut num = g.num().clone();
    for a in upper_zeros.expanded() {
        num = num.deflate(a);
    }
    let num = &num * &inner_den;
    let den = g.den().scaled(inner_num.leading());
    let raw = RationalFunction::new(num, den)?;

    let at_i = raw.value(Complex64::new(0.0, 1.0))?;
    if at_i.norm() == 0.0 {
        return Err(Error::Numeric("outer factor vanishes at i".into()));
    }
    let front = at_i / at_i.norm();
    let outer_rational = RationalFunction::new(raw.num().scaled(front.conj()), raw.den().clone())?;

    for (label, roots) in [
        ("zero", if outer_rational.num().degree().unwrap_or(0) > 0 { outer_rational.zeros()? } else { RootSet::empty() }),
        ("pole", outer_rational.poles().clone()),
    ] {
        if let Some((r, _)) = roots.iter().find(|(r, _)| r.im > UPPER_TOL * (1.0 + r.norm())) {
            return Err(Error::Numeric(format!("outer factor has a {label} at {r} in ℂ⁺")));
        }
    }

    let split = InnerOuterSplit { inner, outer_rational, front };
    for z in sampling::uniform_box(20, 0x10_5a17, (-5.0, 5.0), (0.1, 5.0)) {
        let expected = g.value(z)?;
        let got = split.eval(z)?;
        if (expected - got).norm() > 1e-8 * expected.norm().max(1e-300) + 1e-15 {
            return Err(Error::Numeric(format!("split does not reproduce g at {z}: {got} vs {expected}")));
        }
    }
    Ok(split)
}

/// `|p(x)|² − |q(x)|²` as a polynomial in real `x`; its real roots are
/// where `|p/q| = 1`.
pub(crate) fn modulus_difference(p: &Polynomial, q: &Polynomial) -> Polynomial {
    &(p * &p.conj_coeffs()) - &(q * &q.conj_coeffs())
}

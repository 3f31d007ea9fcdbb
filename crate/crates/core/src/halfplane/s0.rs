use num_complex::Complex64;

use super::{
    certify_bounded, eval_blaschke, eval_outer, eval_singular, BlaschkeProduct, Holomorphic, OuterFunction,
    SingularInner,
};
use crate::error::{Error, Result};

/// `front · B · S · F` on ℂ⁺, extended to ℂ⁻ by `h(ζ) = 1 / conj(h(conj ζ))`.
#[derive(Debug, Clone)]
pub struct S0Function {
    front: Complex64,
    blaschke: BlaschkeProduct,
    singular: SingularInner,
    outer: Option<OuterFunction>,
}

impl S0Function {
    /// Assembles the product. When an outer factor is present the bound
    /// `|h| ≤ 1 + 1e-8` is certified on the probe grid.
    pub fn new(
        front: Complex64,
        blaschke: BlaschkeProduct,
        singular: SingularInner,
        outer: Option<OuterFunction>,
    ) -> Result<Self> {
        if (front.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("front factor {front} is not unimodular")));
        }
        let h = Self { front: front / front.norm(), blaschke, singular, outer };
        if h.outer.is_some() {
            certify_bounded(&h)?;
        }
        Ok(h)
    }

    pub fn blaschke(zeros: &[Complex64]) -> Result<Self> {
        Ok(Self::inner(BlaschkeProduct::from_zeros(zeros)?))
    }

    pub fn inner(blaschke: BlaschkeProduct) -> Self {
        Self {
            front: Complex64::new(1.0, 0.0),
            blaschke,
            singular: SingularInner::trivial(),
            outer: None,
        }
    }

    pub fn constant(front: Complex64) -> Result<Self> {
        Self::new(front, BlaschkeProduct::identity(), SingularInner::trivial(), None)
    }

    pub fn front(&self) -> Complex64 {
        self.front
    }

    pub fn blaschke_part(&self) -> &BlaschkeProduct {
        &self.blaschke
    }

    pub fn singular_part(&self) -> &SingularInner {
        &self.singular
    }

    pub fn outer_part(&self) -> Option<&OuterFunction> {
        self.outer.as_ref()
    }

    pub fn with_front(&self, front: Complex64) -> Result<Self> {
        Self::new(front, self.blaschke.clone(), self.singular.clone(), self.outer.clone())
    }

    /// Only Blaschke zeros (and a unimodular constant).
    pub fn is_finite_blaschke(&self) -> bool {
        self.singular.is_trivial() && self.outer.is_none()
    }

    /// Unimodular constant: no zeros, no singular part, no outer part.
    pub fn is_constant(&self) -> bool {
        self.blaschke.is_trivial() && self.is_finite_blaschke()
    }

    fn upper(&self, z: Complex64) -> Result<Complex64> {
        let mut v = self.front * eval_blaschke(&self.blaschke, z)?;
        if !self.singular.is_trivial() {
            v *= eval_singular(&self.singular, z)?;
        }
        if let Some(o) = &self.outer {
            v *= eval_outer(o, z)?;
        }
        Ok(v)
    }

    fn upper_log_derivative_parts(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        // (h, h') on ℂ⁺ by the product rule.
        let b = eval_blaschke(&self.blaschke, z)? * self.front;
        let db = self.blaschke.derivative(z)? * self.front;
        let (s, ds) = if self.singular.is_trivial() {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (self.singular.value(z)?, self.singular.derivative(z)?)
        };
        let (o, d_o) = match &self.outer {
            Some(o) => (o.value(z)?, o.derivative(z)?),
            None => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        };
        Ok((b * s * o, db * s * o + b * ds * o + b * s * d_o))
    }
}

impl Holomorphic for S0Function {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        if z.im > 0.0 {
            return self.upper(z);
        }
        if z.im == 0.0 {
            if self.outer.is_some() {
                return Err(Error::Domain(format!("outer factor has no value on ℝ at {z}")));
            }
            return self.upper(z);
        }
        let reflected = self.upper(z.conj())?;
        if reflected.norm() == 0.0 {
            return Err(Error::Pole { at: z, pole: z });
        }
        Ok(1.0 / reflected.conj())
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        if z.im >= 0.0 {
            if z.im == 0.0 && self.outer.is_some() {
                return Err(Error::Domain(format!("outer factor has no derivative on ℝ at {z}")));
            }
            return Ok(self.upper_log_derivative_parts(z)?.1);
        }
        let (h, dh) = self.upper_log_derivative_parts(z.conj())?;
        if h.norm() == 0.0 {
            return Err(Error::Pole { at: z, pole: z });
        }
        Ok(-dh.conj() / (h.conj() * h.conj()))
    }
}

/// Evaluator equal to `upper` on ℂ⁺ and `1 / conj(upper(conj ζ))` on ℂ⁻.
pub struct S0Extension<H> {
    upper: H,
}

impl<H: Holomorphic> Holomorphic for S0Extension<H> {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        if z.im > 0.0 {
            return self.upper.value(z);
        }
        if z.im == 0.0 {
            return Err(Error::Domain(format!("S₀ extension undefined on ℝ at {z}")));
        }
        let v = self.upper.value(z.conj())?;
        if v.norm() == 0.0 {
            return Err(Error::Pole { at: z, pole: z });
        }
        Ok(1.0 / v.conj())
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        if z.im > 0.0 {
            return self.upper.derivative(z);
        }
        let v = self.upper.value(z.conj())?;
        if v.norm() == 0.0 {
            return Err(Error::Pole { at: z, pole: z });
        }
        let d = self.upper.derivative(z.conj())?;
        Ok(-d.conj() / (v.conj() * v.conj()))
    }
}

/// Wraps a function bounded by one on ℂ⁺ into its two-sided S₀ extension.
///
/// Boundedness is certified on the 200-point probe grid only.
pub fn s0_extend<H: Holomorphic>(upper: H) -> Result<S0Extension<H>> {
    certify_bounded(&upper)?;
    Ok(S0Extension { upper })
}

#[cfg(test)]
mod tests {
    use super::super::{from_fn, Density, QuadratureConfig};
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn extension_examples() {
        let one = s0_extend(from_fn(|_| Ok(c(1.0, 0.0)))).unwrap();
        assert_eq!(one.value(c(0.3, -2.0)).unwrap(), c(1.0, 0.0));
        let b = s0_extend(BlaschkeProduct::from_zeros(&[c(0.0, 1.0)]).unwrap()).unwrap();
        assert!((b.value(c(0.0, -2.0)).unwrap() - c(3.0, 0.0)).norm() < 1e-14);
        assert!(matches!(b.value(c(0.0, -1.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn extension_rejects_unbounded_and_zero() {
        assert!(s0_extend(from_fn(|z| Ok(z))).is_err());
        assert!(s0_extend(from_fn(|_| Ok(c(0.0, 0.0)))).is_err());
    }

    #[test]
    fn outer_part_with_positive_log_rejected() {
        let o = OuterFunction::new(Density::boxed(-1.0, 1.0, 0.5).unwrap(), QuadratureConfig::default()).unwrap();
        let r = S0Function::new(c(1.0, 0.0), BlaschkeProduct::identity(), SingularInner::trivial(), Some(o));
        assert!(r.is_err());
    }

    #[test]
    fn symmetry_with_outer_part() {
        let o = OuterFunction::new(Density::bump(-1.0, 1.0, -0.7).unwrap(), QuadratureConfig::default()).unwrap();
        let h = S0Function::new(
            c(0.0, 1.0),
            BlaschkeProduct::from_zeros(&[c(0.5, 0.5)]).unwrap(),
            SingularInner::new(vec![(2.0, 0.4)], 0.3).unwrap(),
            Some(o),
        )
        .unwrap();
        let z = c(0.3, 0.8);
        let prod = h.value(z.conj()).unwrap() * h.value(z).unwrap().conj();
        assert!((prod - 1.0).norm() < 1e-9);
        let d = h.derivative(z.conj()).unwrap();
        let cauchy = super::super::cauchy_derivative(&h, z.conj(), 1).unwrap();
        assert!((d - cauchy).norm() < 1e-7 * (1.0 + d.norm()));
    }

    proptest! {
        #[test]
        fn blaschke_s0_symmetry(
            zeros in prop::collection::vec((-3.0..3.0f64, 0.1..3.0f64), 1..=4),
            x in -5.0..5.0f64,
            y in 0.05..5.0f64,
        ) {
            let zs: Vec<Complex64> = zeros.iter().map(|&(a, b)| c(a, b)).collect();
            let h = S0Function::blaschke(&zs).unwrap();
            let z = c(x, y);
            if let (Ok(up), Ok(down)) = (h.value(z), h.value(z.conj())) {
                prop_assert!((down * up.conj() - 1.0).norm() < 1e-9);
                prop_assert!(up.norm() <= 1.0 + 1e-12);
            }
        }
    }
}

use num_complex::Complex64;

use super::Holomorphic;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CayleyDirection {
    /// `f ↦ (1 + i f) / (1 − i f)`, Nevanlinna side to S₀ side.
    Forward,
    /// `h ↦ i (1 − h) / (1 + h)`.
    Inverse,
}

/// Cayley transform of a wrapped function.
pub struct Cayley<F> {
    inner: F,
    direction: CayleyDirection,
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn excluded_probe() -> [Complex64; 6] {
    [
        Complex64::new(0.0, 1.0),
        Complex64::new(1.3, 0.4),
        Complex64::new(-2.1, 2.5),
        Complex64::new(0.2, 7.0),
        Complex64::new(4.0, 0.9),
        Complex64::new(-0.6, 0.15),
    ]
}

/// Builds the Cayley transform after probing that the input is not one of
/// the excluded constants (`±i` forward, `−1` inverse).
pub fn cayley<F: Holomorphic>(f: F, direction: CayleyDirection) -> Result<Cayley<F>> {
    let excluded: &[Complex64] = match direction {
        CayleyDirection::Forward => &[I, -I],
        CayleyDirection::Inverse => &[Complex64::new(-1.0, 0.0)],
    };
    for &e in excluded {
        let identically = excluded_probe()
            .iter()
            .all(|&z| f.value(z).map(|v| (v - e).norm() < 1e-12).unwrap_or(false));
        if identically {
            return Err(Error::Domain(format!("Cayley transform of a function identically {e}")));
        }
    }
    Ok(Cayley { inner: f, direction })
}

impl<F> Cayley<F> {
    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<F: Holomorphic> Holomorphic for Cayley<F> {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        let v = self.inner.value(z)?;
        let (num, den) = match self.direction {
            CayleyDirection::Forward => (1.0 + I * v, 1.0 - I * v),
            CayleyDirection::Inverse => (I * (1.0 - v), 1.0 + v),
        };
        if den.norm() <= 1e-14 * (1.0 + num.norm()) {
            return Err(Error::Pole { at: z, pole: z });
        }
        Ok(num / den)
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let v = self.inner.value(z)?;
        let d = self.inner.derivative(z)?;
        let den = match self.direction {
            CayleyDirection::Forward => 1.0 - I * v,
            CayleyDirection::Inverse => 1.0 + v,
        };
        if den.norm() <= 1e-14 {
            return Err(Error::Pole { at: z, pole: z });
        }
        Ok(match self.direction {
            CayleyDirection::Forward => 2.0 * I * d / (den * den),
            CayleyDirection::Inverse => -2.0 * I * d / (den * den),
        })
    }
}

/// `ζ ↦ conj(f(conj ζ))`.
pub struct Reflected<F>(F);

pub fn schwartz_reflect<F: Holomorphic>(f: F) -> Reflected<F> {
    Reflected(f)
}

impl<F: Holomorphic> Holomorphic for Reflected<F> {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.0.value(z.conj())?.conj())
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.0.derivative(z.conj())?.conj())
    }
}

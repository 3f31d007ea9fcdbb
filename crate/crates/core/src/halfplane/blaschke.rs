use num_complex::Complex64;

use super::Holomorphic;
use crate::error::{Error, Result};
use crate::funclib::{Polynomial, RootSet};

/// Finite Blaschke product on the upper half-plane.
///
/// Each factor `e^{iα}(ζ − a)/(ζ − ā)` carries the phase that makes its value
/// at `i` nonnegative; for `a = i` the condition is vacuous and `α = 0`.
#[derive(Debug, Clone)]
pub struct BlaschkeProduct {
    zeros: RootSet,
    front: Complex64,
    // (zero, unimodular phase), expanded by multiplicity
    factors: Vec<(Complex64, Complex64)>,
}

/// Canonical phase `e^{iα}` for a zero at `a`.
pub fn canonical_phase(a: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let ratio = (i - a) / (i - a.conj());
    if ratio.norm() < 1e-14 {
        Complex64::new(1.0, 0.0)
    } else {
        (ratio / ratio.norm()).conj()
    }
}

impl BlaschkeProduct {
    pub fn new(zeros: RootSet, front: Complex64) -> Result<Self> {
        if (front.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("front factor {front} is not unimodular")));
        }
        if let Some((z, _)) = zeros.iter().find(|(z, _)| !(z.im > 0.0)) {
            return Err(Error::Domain(format!("Blaschke zero {z} is not in the open upper half-plane")));
        }
        let factors = zeros
            .expanded()
            .into_iter()
            .map(|a| (a, canonical_phase(a)))
            .collect();
        Ok(Self { zeros, front, factors })
    }

    /// Product over simple zeros with unit front.
    pub fn from_zeros(zeros: &[Complex64]) -> Result<Self> {
        Self::new(RootSet::from_points(zeros), Complex64::new(1.0, 0.0))
    }

    pub fn identity() -> Self {
        Self { zeros: RootSet::empty(), front: Complex64::new(1.0, 0.0), factors: Vec::new() }
    }

    pub fn zeros(&self) -> &RootSet {
        &self.zeros
    }

    pub fn front(&self) -> Complex64 {
        self.front
    }

    pub fn with_front(&self, front: Complex64) -> Result<Self> {
        Self::new(self.zeros.clone(), front)
    }

    /// Number of zeros counted with multiplicity.
    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Numerator and denominator polynomials (phases and front included in
    /// the numerator).
    pub fn as_polynomials(&self) -> (Polynomial, Polynomial) {
        let phase: Complex64 = self.factors.iter().map(|(_, p)| p).product::<Complex64>() * self.front;
        let zeros: Vec<Complex64> = self.factors.iter().map(|(a, _)| *a).collect();
        let poles: Vec<Complex64> = zeros.iter().map(|a| a.conj()).collect();
        (
            Polynomial::from_roots(&zeros, phase),
            Polynomial::from_roots(&poles, Complex64::new(1.0, 0.0)),
        )
    }

    fn check_pole(&self, z: Complex64) -> Result<()> {
        for (a, _) in &self.factors {
            if (z - a.conj()).norm() < 1e-12 * (1.0 + z.norm()) {
                return Err(Error::Pole { at: z, pole: a.conj() });
            }
        }
        Ok(())
    }
}

/// `front · Π e^{iα_n}(ζ − ζ_n)/(ζ − ζ̄_n)`, valid in both half-planes.
pub fn eval_blaschke(b: &BlaschkeProduct, z: Complex64) -> Result<Complex64> {
    b.check_pole(z)?;
    Ok(b
        .factors
        .iter()
        .fold(b.front, |acc, (a, phase)| acc * phase * (z - a) / (z - a.conj())))
}

impl Holomorphic for BlaschkeProduct {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        eval_blaschke(self, z)
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.check_pole(z)?;
        let values: Vec<Complex64> = self
            .factors
            .iter()
            .map(|(a, p)| p * (z - a) / (z - a.conj()))
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (k, (a, p)) in self.factors.iter().enumerate() {
            let d = p * (a - a.conj()) / ((z - a.conj()) * (z - a.conj()));
            let rest: Complex64 = values
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, v)| *v)
                .product();
            total += d * rest;
        }
        Ok(total * self.front)
    }
}

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funclib::{poly_roots, Polynomial, RationalFunction};

/// Rectangle `[real_lo, real_hi] × [imag_lo, imag_hi]` in ℂ⁺ for argument
/// tracking. [`count_upper_roots`] enlarges it to cover all roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub real_lo: f64,
    pub real_hi: f64,
    pub imag_lo: f64,
    pub imag_hi: f64,
    pub samples_per_side: usize,
    pub max_refinements: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self { real_lo: -10.0, real_hi: 10.0, imag_lo: 1e-3, imag_hi: 10.0, samples_per_side: 64, max_refinements: 8 }
    }
}

impl ContourSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.imag_lo > 0.0
            && self.imag_hi > self.imag_lo
            && self.real_hi > self.real_lo
            && self.samples_per_side >= 16
            && [self.real_lo, self.real_hi, self.imag_lo, self.imag_hi].iter().all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid contour {self:?}")))
        }
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.real_lo, self.imag_lo),
            Complex64::new(self.real_hi, self.imag_lo),
            Complex64::new(self.real_hi, self.imag_hi),
            Complex64::new(self.real_lo, self.imag_hi),
        ]
    }

    fn distance(&self, z: Complex64) -> f64 {
        let c = self.corners();
        (0..4).map(|k| segment_distance(z, c[k], c[(k + 1) % 4])).fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = ((z - a) * d.conj()).re / d.norm_sqr();
    (z - (a + d * t.clamp(0.0, 1.0))).norm()
}

const NEAR_CONTOUR: f64 = 1e-6;
const MAX_BISECTIONS: u32 = 48;

/// Number of solutions of `f(ζ) = w` in ℂ⁺ (`w ∈ ℂ⁻`), as the winding number
/// of `num(f) − w·den(f)` around the contour.
///
/// Winding the numerator counts zeros only, so poles of `f` in ℂ⁺ do not
/// enter. The contour grows to the Cauchy root bound; if a root lies within
/// `1e-6` of it the bottom edge is lowered and the sides pushed out, up to
/// `max_refinements` times.
pub fn count_upper_roots(f: &RationalFunction, w: Complex64, contour: &ContourSpec) -> Result<usize> {
    contour.validate()?;
    if !(w.im < 0.0) {
        return Err(Error::Domain(format!("witness {w} must lie in the lower half-plane")));
    }
    let p = f.num() - &f.den().scaled(w);
    let degree = match p.degree() {
        None => return Err(Error::Domain("f is identically equal to the witness".into())),
        Some(0) => return Ok(0),
        Some(d) => d,
    };
    let roots = poly_roots(&p, 1e-6)?;
    if let Some((r, _)) = roots.iter().find(|(r, _)| r.im.abs() < NEAR_CONTOUR) {
        return Err(Error::Contour(format!("root {r} on the real axis")));
    }

    let lead = p.leading().norm();
    let bound = 1.0 + p.coeffs()[..degree].iter().map(|c| c.norm() / lead).fold(0.0, f64::max);
    let mut rect = *contour;
    rect.real_lo = rect.real_lo.min(-bound);
    rect.real_hi = rect.real_hi.max(bound);
    rect.imag_hi = rect.imag_hi.max(bound);

    let mut refinements = 0;
    while roots.iter().any(|(r, _)| rect.distance(*r) < NEAR_CONTOUR) {
        if refinements == rect.max_refinements {
            return Err(Error::Contour(format!("root within {NEAR_CONTOUR:e} of the contour after {refinements} refinements")));
        }
        rect.imag_lo *= 0.5;
        rect.real_lo *= 1.1;
        rect.real_hi *= 1.1;
        rect.imag_hi *= 1.1;
        refinements += 1;
    }

    let winding = winding_number(&p, &rect)?;
    let n = winding.round();
    if (winding - n).abs() >= 1e-3 || n < 0.0 {
        return Err(Error::Numeric(format!("winding number {winding} is not a nonnegative integer")));
    }
    Ok(n as usize)
}

fn winding_number(p: &Polynomial, rect: &ContourSpec) -> Result<f64> {
    let eval = |z: Complex64| -> Result<Complex64> {
        let v = p.eval(z);
        if v.norm() == 0.0 || !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Contour(format!("polynomial vanishes or overflows at {z} on the contour")));
        }
        Ok(v)
    };
    let corners = rect.corners();
    let n = rect.samples_per_side;
    let mut total = 0.0;
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        let mut prev_z = a;
        let mut prev_v = eval(a)?;
        for j in 1..=n {
            let z = a + (b - a) * (j as f64 / n as f64);
            let v = eval(z)?;
            total += track(&eval, prev_z, z, prev_v, v, 0)?;
            prev_z = z;
            prev_v = v;
        }
    }
    Ok(total / TAU)
}

/// Argument change from `a` to `b`, bisecting until each step is at most π/2.
fn track<E>(eval: &E, a: Complex64, b: Complex64, va: Complex64, vb: Complex64, depth: u32) -> Result<f64>
where
    E: Fn(Complex64) -> Result<Complex64>,
{
    let d = (vb / va).arg();
    if d.abs() <= FRAC_PI_2 {
        return Ok(d);
    }
    if depth == MAX_BISECTIONS {
        return Err(Error::Contour(format!("argument jump not resolved between {a} and {b}")));
    }
    let m = (a + b) * 0.5;
    let vm = eval(m)?;
    Ok(track(eval, a, m, va, vm, depth + 1)? + track(eval, m, b, vm, vb, depth + 1)?)
}

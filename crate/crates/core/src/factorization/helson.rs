use num_complex::Complex64;

use super::split::modulus_difference;
use super::{coprime_check, UPPER_TOL};
use crate::error::{Error, Result};
use crate::funclib::{cayley_rational, check_nsym_symmetry, poly_roots, RationalFunction, RootSet};
use crate::halfplane::{
    BlaschkeProduct, Density, Holomorphic, OuterFunction, QuadratureConfig, S0Function, SingularInner,
};
use crate::sampling;

/// Coprime pair in S₀ with `f = i(h₂ − h₁)/(h₂ + h₁)`.
#[derive(Debug, Clone)]
pub struct HelsonPair {
    pub h1: S0Function,
    pub h2: S0Function,
    /// Largest scaled reconstruction residual `|f̃ − f| / (1 + |f|)` over
    /// the decomposition probes.
    pub certificate: f64,
}

impl HelsonPair {
    pub fn quotient(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.h1.value(z)? / self.h2.value(z)?)
    }
}

/// `i(h₂(ζ) − h₁(ζ)) / (h₂(ζ) + h₁(ζ))`.
pub fn reconstruct_from_pair(pair: &HelsonPair, z: Complex64) -> Result<Complex64> {
    let a = pair.h1.value(z)?;
    let b = pair.h2.value(z)?;
    let s = a + b;
    if s.norm() <= 1e-13 * (a.norm() + b.norm()) {
        return Err(Error::Pole { at: z, pole: z });
    }
    Ok(Complex64::i() * (b - a) / s)
}

const PROBES: usize = 30;
const PROBE_SEED: u64 = 0x4e5f;
const TRIVIAL_LOG: f64 = 1e-10;

/// Splits a rational `g` of bounded type into `h₁/h₂` with `h₁, h₂ ∈ S₀`
/// coprime: Blaschke factors over the ℂ⁺ zeros and poles of `g`, outer
/// factors from the negative and positive parts of `log |g|` on ℝ.
///
/// `h₂` carries front 1; `h₁` carries the unimodular constant that makes
/// the quotient exact.
pub fn decompose_quotient(g: &RationalFunction) -> Result<(S0Function, S0Function)> {
    if g.num().is_zero() {
        return Err(Error::Domain("quotient of the zero function".into()));
    }
    let upper = |z: Complex64| z.im > UPPER_TOL * (1.0 + z.norm());
    let zeros = if g.num().degree() == Some(0) { RootSet::empty() } else { g.zeros()? };
    let v1 = BlaschkeProduct::new(zeros.filter(upper), Complex64::new(1.0, 0.0))?;
    let v2 = BlaschkeProduct::new(g.poles().filter(upper), Complex64::new(1.0, 0.0))?;

    let (o1, o2) = outer_parts(g)?;
    let upper_part = |v: &BlaschkeProduct, o: &Option<OuterFunction>, z| -> Result<Complex64> {
        let mut x = v.value(z)?;
        if let Some(o) = o {
            x *= o.value(z)?;
        }
        Ok(x)
    };

    // anchor the unimodular constant at a point where nothing degenerates
    let anchors = [
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(0.5, 1.5),
        Complex64::new(-0.7, 0.8),
        Complex64::new(0.0, 3.0),
        Complex64::new(1.3, 0.4),
    ];
    let mut front = None;
    for z in anchors {
        let (Ok(a), Ok(b), Ok(gz)) = (upper_part(&v1, &o1, z), upper_part(&v2, &o2, z), g.value(z)) else {
            continue;
        };
        if a.norm() > 1e-3 && b.norm() > 1e-3 {
            let c = gz * b / a;
            front = Some(c / c.norm());
            break;
        }
    }
    let front = front.ok_or_else(|| Error::Numeric("no admissible anchor for the unimodular constant".into()))?;
    let h1 = S0Function::new(front, v1, SingularInner::trivial(), o1)?;
    let h2 = S0Function::new(Complex64::new(1.0, 0.0), v2, SingularInner::trivial(), o2)?;
    Ok((h1, h2))
}

fn outer_parts(g: &RationalFunction) -> Result<(Option<OuterFunction>, Option<OuterFunction>)> {
    let log = Density::log_rational_modulus(g.num().coeffs(), g.den().coeffs())?;
    let diff = modulus_difference(g.num(), g.den());
    if diff.is_zero() {
        return Ok((None, None));
    }
    let probe = log.sample_grid(4096);
    if probe.iter().all(|&t| log.eval(t).abs() < TRIVIAL_LOG) {
        return Ok((None, None));
    }
    // where |g| crosses 1 the split has kinks
    let crossings: Vec<f64> = if diff.degree().unwrap_or(0) > 0 {
        poly_roots(&diff.clean_imaginary(1e-12), 1e-6)?
            .iter()
            .filter(|(r, _)| r.im.abs() < 1e-7 * (1.0 + r.norm()))
            .map(|(r, _)| r.re)
            .collect()
    } else {
        Vec::new()
    };
    let neg = log.map("min(log|g|, 0)", crossings.clone(), |m| m.min(0.0));
    let pos = log.map("-max(log|g|, 0)", crossings, |m| -m.max(0.0));
    let quad = QuadratureConfig::default();
    let build = |d: Density| -> Result<Option<OuterFunction>> {
        if probe.iter().all(|&t| d.eval(t).abs() < TRIVIAL_LOG) {
            return Ok(None);
        }
        OuterFunction::new(d, quad).map(Some).map_err(|e| match e {
            Error::Quadrature { .. } => Error::Numeric(format!("outer factor quadrature failed: {e}")),
            other => other,
        })
    };
    Ok((build(neg)?, build(pos)?))
}

/// Coprime decomposition of a non-constant symmetric rational function.
pub fn helson_decompose(f: &RationalFunction) -> Result<HelsonPair> {
    if f.is_constant() {
        return Err(Error::Domain("helson decomposition of a constant function".into()));
    }
    if !check_nsym_symmetry(f, 1e-10) {
        return Err(Error::Domain(format!("{f} fails N_sym symmetry")));
    }
    let g = cayley_rational(f)?;
    let (h1, h2) = decompose_quotient(&g)?;
    let mut pair = HelsonPair { h1, h2, certificate: 0.0 };

    let report = coprime_check(&pair.h1, &pair.h2, 1e-8);
    if !report.coprime {
        return Err(Error::Numeric(format!("decomposition is not coprime: {:?}", report.witnesses)));
    }

    let mut worst: f64 = 0.0;
    let mut used = 0;
    for z in sampling::probes_both(4 * PROBES, PROBE_SEED) {
        if used == PROBES {
            break;
        }
        let Ok(fz) = f.value(z) else { continue };
        let Ok(rz) = reconstruct_from_pair(&pair, z) else { continue };
        worst = worst.max((rz - fz).norm() / (1.0 + fz.norm()));
        used += 1;
    }
    if !(worst < 1e-6) {
        return Err(Error::Numeric(format!("reconstruction residual {worst:e} exceeds 1e-6")));
    }
    pair.certificate = worst;
    Ok(pair)
}

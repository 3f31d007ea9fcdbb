use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::funclib::Polynomial;
use num_complex::Complex64;

use super::quadrature::{integrate, integrate_line, Integral, QuadValue, QuadratureConfig};

/// Where a density may be nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// Vanishes outside `[lo, hi]`.
    Interval(f64, f64),
    /// The whole real line; integrals use the tangent substitution.
    Line,
}

/// A real function on ℝ with a declared support, used both as an absolutely
/// continuous measure density and as boundary log-modulus data.
#[derive(Clone)]
pub struct Density {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    support: Support,
    kinks: Vec<f64>,
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density")
            .field("name", &self.name)
            .field("support", &self.support)
            .finish()
    }
}

impl Density {
    pub fn custom<F>(name: impl Into<String>, support: Support, kinks: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if let Support::Interval(lo, hi) = support {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Domain(format!("invalid support [{lo}, {hi}]")));
            }
        }
        Ok(Self { name: name.into(), f: Arc::new(f), support, kinks })
    }

    pub fn constant(c: f64) -> Self {
        Self::custom(format!("constant({c})"), Support::Line, Vec::new(), move |_| c).expect("line support")
    }

    /// `height` on `[lo, hi]`, zero elsewhere.
    pub fn boxed(lo: f64, hi: f64, height: f64) -> Result<Self> {
        Self::custom(
            format!("box({lo}, {hi}, {height})"),
            Support::Interval(lo, hi),
            Vec::new(),
            move |t| if (lo..=hi).contains(&t) { height } else { 0.0 },
        )
    }

    /// Smooth bump `height · exp(1 − 1/(1 − s²))` with `s` the position
    /// rescaled to `[-1, 1]` across `[lo, hi]`.
    pub fn bump(lo: f64, hi: f64, height: f64) -> Result<Self> {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        Self::custom(format!("bump({lo}, {hi}, {height})"), Support::Interval(lo, hi), Vec::new(), move |t| {
            let s = (t - mid) / half;
            if s.abs() >= 1.0 {
                0.0
            } else {
                height * (1.0 - 1.0 / (1.0 - s * s)).exp()
            }
        })
    }

    /// `|num(t) / den(t)|` for real-coefficient polynomials.
    pub fn rational_modulus(num: &[f64], den: &[f64]) -> Result<Self> {
        let (p, q) = real_pair(num, den)?;
        let kinks = real_roots(&p);
        Self::custom(format!("rational_modulus({num:?}, {den:?})"), Support::Line, kinks, move |t| {
            let z = Complex64::new(t, 0.0);
            (p.eval(z) / q.eval(z)).norm()
        })
    }

    /// `log |num(t) / den(t)|`, evaluated from the factored form.
    pub fn log_rational_modulus(num: &[Complex64], den: &[Complex64]) -> Result<Self> {
        let p = Polynomial::new(num.to_vec());
        let q = Polynomial::new(den.to_vec());
        if p.is_zero() || q.is_zero() {
            return Err(Error::Domain("log-modulus of a zero polynomial".into()));
        }
        let pr = crate::funclib::poly_roots(&p, 1e-6)?.expanded();
        let qr = crate::funclib::poly_roots(&q, 1e-6)?.expanded();
        let c = (p.leading() / q.leading()).norm().ln();
        let name = format!("log_rational_modulus({p} / {q})");
        Self::custom(name, Support::Line, Vec::new(), move |t| {
            let z = Complex64::new(t, 0.0);
            c + pr.iter().map(|r| (z - r).norm().ln()).sum::<f64>()
                - qr.iter().map(|r| (z - r).norm().ln()).sum::<f64>()
        })
    }

    /// Pointwise transform sharing the support and kinks of `self`.
    pub fn map<G>(&self, name: impl Into<String>, extra_kinks: Vec<f64>, g: G) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let inner = self.f.clone();
        let mut kinks = self.kinks.clone();
        kinks.extend(extra_kinks);
        Self { name: name.into(), f: Arc::new(move |t| g(inner(t))), support: self.support, kinks }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.support {
            Support::Interval(lo, hi) if t < lo || t > hi => 0.0,
            _ => (self.f)(t),
        }
    }

    /// `∫ kernel(t) · ρ(t) dt / (1 + t²)` over the support.
    ///
    /// `kernel` should be bounded at infinity; `breaks` are extra
    /// subdivision points (e.g. the real part of a nearby singularity).
    pub fn integrate<V, K>(&self, kernel: K, breaks: &[f64], config: &QuadratureConfig) -> Result<Integral<V>>
    where
        V: QuadValue,
        K: Fn(f64) -> V,
    {
        let mut points: Vec<f64> = breaks.to_vec();
        points.extend(self.kinks.iter().copied());
        match self.support {
            Support::Interval(lo, hi) => integrate(
                |t| kernel(t).scaled((self.f)(t) / (1.0 + t * t)),
                lo,
                hi,
                &points,
                config,
            ),
            Support::Line => integrate_line(|t| {
                let v = (self.f)(t);
                if v == 0.0 || !t.is_finite() {
                    kernel(t).scaled(0.0)
                } else {
                    kernel(t).scaled(v)
                }
            }, &points, config),
        }
    }

    /// Numerical value of `∫ |ρ(t)| dt / (1 + t²)`.
    pub fn weighted_l1(&self, config: &QuadratureConfig) -> Result<f64> {
        let abs = self.map(format!("|{}|", self.name), Vec::new(), f64::abs);
        let r = abs.integrate(|_| Complex64::new(1.0, 0.0), &[], config)?;
        if r.value.re.is_finite() {
            Ok(r.value.re)
        } else {
            Err(Error::Domain(format!("density {} is not integrable against dt/(1+t²)", self.name)))
        }
    }

    /// Grid of sample abscissae over the support (tangent-spaced on ℝ).
    pub fn sample_grid(&self, n: usize) -> Vec<f64> {
        match self.support {
            Support::Interval(lo, hi) => (0..n).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64).collect(),
            Support::Line => (0..n)
                .map(|k| (-std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * (k as f64 + 0.5) / n as f64).tan())
                .collect(),
        }
    }
}

fn real_pair(num: &[f64], den: &[f64]) -> Result<(Polynomial, Polynomial)> {
    let p = Polynomial::from_real(num);
    let q = Polynomial::from_real(den);
    if q.is_zero() {
        return Err(Error::Domain("zero denominator".into()));
    }
    if let Some(r) = real_roots(&q).first() {
        return Err(Error::Domain(format!("denominator vanishes on the real axis at {r}")));
    }
    Ok((p, q))
}

fn real_roots(p: &Polynomial) -> Vec<f64> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    crate::funclib::poly_roots(p, 1e-6)
        .map(|rs| {
            rs.iter()
                .filter(|(r, _)| r.im.abs() < 1e-9 * (1.0 + r.norm()))
                .map(|(r, _)| r.re)
                .collect()
        })
        .unwrap_or_default()
}

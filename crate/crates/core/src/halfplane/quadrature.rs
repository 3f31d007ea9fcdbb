//! Adaptive Gauss–Kronrod (7/15) quadrature for complex and vector valued
//! integrands, with a tangent substitution for integrals over the real line.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances of the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-11, max_subdivisions: 4000 }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) || max_subdivisions == 0 {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        Ok(Self { abs_tol, rel_tol, max_subdivisions })
    }

    /// Combined tolerance for a result of size `scale`.
    pub fn tolerance(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale)
    }
}

/// Values the integrator can accumulate.
pub trait QuadValue: Clone {
    fn scaled(&self, s: f64) -> Self;
    fn add_scaled(&mut self, other: &Self, s: f64);
    fn distance(&self, other: &Self) -> f64;
    fn magnitude(&self) -> f64;
}

impl QuadValue for Complex64 {
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
    fn add_scaled(&mut self, other: &Self, s: f64) {
        *self += other * s;
    }
    fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl QuadValue for Vec<Complex64> {
    fn scaled(&self, s: f64) -> Self {
        self.iter().map(|v| v * s).collect()
    }
    fn add_scaled(&mut self, other: &Self, s: f64) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b * s;
        }
    }
    fn distance(&self, other: &Self) -> f64 {
        self.iter().zip(other).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
    fn magnitude(&self) -> f64 {
        self.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone)]
pub struct Integral<V> {
    pub value: V,
    pub error: f64,
    pub subdivisions: usize,
}

struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

fn kronrod<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> Segment<V> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kron = fc.scaled(WGK[7]);
    let mut gauss = fc.scaled(WG[3]);
    for (j, &x) in XGK[..7].iter().enumerate() {
        let lo = f(centre - half * x);
        let hi = f(centre + half * x);
        kron.add_scaled(&lo, WGK[j]);
        kron.add_scaled(&hi, WGK[j]);
        if j % 2 == 1 {
            gauss.add_scaled(&lo, WG[j / 2]);
            gauss.add_scaled(&hi, WG[j / 2]);
        }
    }
    let value = kron.scaled(half);
    let gauss = gauss.scaled(half);
    // |Kronrod − Gauss| is a conservative bound for the Kronrod error.
    let error = value.distance(&gauss);
    Segment { a, b, value, error }
}

/// Adaptive integration of `f` over `[a, b]` with interior breakpoints.
pub fn integrate<V: QuadValue, F: FnMut(f64) -> V>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    config: &QuadratureConfig,
) -> Result<Integral<V>> {
    let mut edges = vec![a];
    let mut interior: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    interior.sort_by(f64::total_cmp);
    interior.dedup();
    edges.extend(interior);
    edges.push(b);

    let mut segments: Vec<Segment<V>> = edges.windows(2).map(|w| kronrod(&mut f, w[0], w[1])).collect();
    let mut subdivisions = 0;
    loop {
        let mut total = segments[0].value.scaled(0.0);
        let mut error = 0.0;
        for s in &segments {
            total.add_scaled(&s.value, 1.0);
            error += s.error;
        }
        if error <= config.tolerance(total.magnitude()) {
            return Ok(Integral { value: total, error, subdivisions });
        }
        if subdivisions >= config.max_subdivisions {
            return Err(Error::Quadrature { estimate: error, subdivisions });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            return Err(Error::Quadrature { estimate: error, subdivisions });
        }
        segments.push(kronrod(&mut f, seg.a, mid));
        segments.push(kronrod(&mut f, mid, seg.b));
        subdivisions += 1;
    }
}

/// Integral of `g(t)` over the real line after the substitution `t = tan θ`.
///
/// `g` receives `t` and must already include the Jacobian-free integrand; the
/// caller passes `weighted(t) = g(t)·(1 + t²)` so that decaying integrands stay
/// bounded near `θ = ±π/2`. Breakpoints are given in `t`.
pub fn integrate_line<V: QuadValue, F: FnMut(f64) -> V>(
    mut weighted: F,
    breakpoints_t: &[f64],
    config: &QuadratureConfig,
) -> Result<Integral<V>> {
    let thetas: Vec<f64> = breakpoints_t.iter().map(|t| t.atan()).collect();
    integrate(|theta| weighted(theta.tan()), -FRAC_PI_2, FRAC_PI_2, &thetas, config)
}

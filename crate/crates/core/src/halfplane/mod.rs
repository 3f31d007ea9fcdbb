//! Evaluators for half-plane function classes: Blaschke products, singular
//! inner factors, outer functions, Herglotz–Nevanlinna representations, the
//! Cayley transform, Schwarz reflection and the two-sided S₀ extension.
//!
//! Every evaluator accepts arguments in both half-planes and applies the
//! extension rule of its class itself.

mod blaschke;
mod density;
mod herglotz;
mod outer;
pub mod quadrature;
mod s0;
mod singular;
mod transforms;

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funclib::RationalFunction;

pub use blaschke::{eval_blaschke, BlaschkeProduct};
pub use density::{Density, Support};
pub use herglotz::{eval_herglotz, HerglotzRepresentation};
pub use outer::{eval_outer, OuterFunction};
pub use quadrature::QuadratureConfig;
pub use s0::{s0_extend, S0Extension, S0Function};
pub use singular::{eval_singular, SingularInner};
pub use transforms::{cayley, schwartz_reflect, Cayley, CayleyDirection, Reflected};

/// A function analytic off the real axis (up to isolated poles).
pub trait Holomorphic: Send + Sync {
    fn value(&self, z: Complex64) -> Result<Complex64>;

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        cauchy_derivative(self, z, 1)
    }

    fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        cauchy_derivative(self, z, 2)
    }
}

/// Shared handle to a holomorphic function.
pub type FnHandle = Arc<dyn Holomorphic>;

impl<T: Holomorphic + ?Sized> Holomorphic for Arc<T> {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        (**self).value(z)
    }
    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        (**self).derivative(z)
    }
    fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        (**self).second_derivative(z)
    }
}

impl<T: Holomorphic + ?Sized> Holomorphic for &T {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        (**self).value(z)
    }
    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        (**self).derivative(z)
    }
    fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        (**self).second_derivative(z)
    }
}

impl Holomorphic for RationalFunction {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        self.eval_order(z, 0)
    }
    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.eval_order(z, 1)
    }
    fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        self.eval_order(z, 2)
    }
}

/// Adapter turning a closure into a [`Holomorphic`] value.
pub struct FromFn<F>(pub F);

impl<F> Holomorphic for FromFn<F>
where
    F: Fn(Complex64) -> Result<Complex64> + Send + Sync,
{
    fn value(&self, z: Complex64) -> Result<Complex64> {
        (self.0)(z)
    }
}

pub fn from_fn<F>(f: F) -> FnHandle
where
    F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
{
    Arc::new(FromFn(f))
}

const CAUCHY_NODES: usize = 32;

/// Derivative of order 1 or 2 from the Cauchy integral on a small circle
/// around `z` that stays off the real axis (trapezoidal rule).
pub fn cauchy_derivative<H: Holomorphic + ?Sized>(h: &H, z: Complex64, order: u32) -> Result<Complex64> {
    if z.im == 0.0 {
        return Err(Error::Domain(format!("derivative on the real axis at {z}")));
    }
    let r = (0.25 * z.im.abs()).min(0.25 * (1.0 + z.norm()));
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..CAUCHY_NODES {
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / CAUCHY_NODES as f64);
        acc += h.value(z + w * r)? * w.powi(-(order as i32));
    }
    let factorial = if order == 2 { 2.0 } else { 1.0 };
    Ok(acc * factorial / (CAUCHY_NODES as f64 * r.powi(order as i32)))
}

/// The 200-point certificate grid in ℂ⁺: ten log-spaced heights in
/// `[1e-2, 1e2]` times twenty real parts evenly spaced in `[-10, 10]`.
pub fn probe_grid_upper() -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(200);
    for j in 0..10 {
        let y = 10f64.powf(-2.0 + 4.0 * j as f64 / 9.0);
        for k in 0..20 {
            let x = -10.0 + 20.0 * k as f64 / 19.0;
            pts.push(Complex64::new(x, y));
        }
    }
    pts
}

/// Checks `sup |upper| ≤ 1 + 1e-8` and `upper ≢ 0` on [`probe_grid_upper`].
pub(crate) fn certify_bounded<H: Holomorphic + ?Sized>(upper: &H) -> Result<()> {
    let mut largest: f64 = 0.0;
    for z in probe_grid_upper() {
        let v = match upper.value(z) {
            Ok(v) => v.norm(),
            Err(Error::Pole { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        if v > 1.0 + 1e-8 {
            return Err(Error::Domain(format!("|h({z})| = {v} exceeds 1 on the probe grid")));
        }
        largest = largest.max(v);
    }
    if largest < 1e-300 {
        return Err(Error::Domain("function vanishes on the probe grid".into()));
    }
    Ok(())
}

use num_complex::Complex64;

use crate::error::Result;
use crate::halfplane::Holomorphic;

/// Relative distance below which a kernel argument pair counts as diagonal.
pub const DIAG_TOL: f64 = 1e-8;

fn near(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= DIAG_TOL * (1.0 + a.norm())
}

/// `N_f(ζ, w) = (f(ζ) − conj f(w)) / (ζ − conj w)`, with `f′(ζ)` on the
/// diagonal `ζ = conj w`.
pub fn nevanlinna_kernel<H: Holomorphic + ?Sized>(f: &H, zeta: Complex64, w: Complex64) -> Result<Complex64> {
    let wb = w.conj();
    if near(zeta, wb) {
        return f.derivative(zeta);
    }
    Ok((f.value(zeta)? - f.value(w)?.conj()) / (zeta - wb))
}

/// `s_h(ζ, w) = (1 − h(ζ) conj h(w)) / (−i (ζ − conj w))`, with the limit
/// `−i h′(ζ) conj h(w)` on the diagonal `ζ = conj w`.
pub fn schur_kernel<H: Holomorphic + ?Sized>(h: &H, zeta: Complex64, w: Complex64) -> Result<Complex64> {
    let hw = h.value(w)?.conj();
    let wb = w.conj();
    if near(zeta, wb) {
        return Ok(-Complex64::i() * h.derivative(zeta)? * hw);
    }
    Ok((1.0 - h.value(zeta)? * hw) / (-Complex64::i() * (zeta - wb)))
}

/// `(D_λ g)(x) = (g(x) − g(λ)) / (x − λ)`, with `g′(λ)` at `x = λ`.
pub fn difference_quotient<H: Holomorphic + ?Sized>(g: &H, lambda: Complex64, x: Complex64) -> Result<Complex64> {
    if near(x, lambda) {
        return g.derivative(lambda);
    }
    Ok((g.value(x)? - g.value(lambda)?) / (x - lambda))
}

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::gram::{gram_matrix, KernelGram, INERTIA_REL_TOL};
use super::kernel::{nevanlinna_kernel, DIAG_TOL};
use crate::error::{Error, Result};
use crate::halfplane::FnHandle;

/// Finite compression of the difference-quotient model on the span of the
/// kernel functions `φ(w_j) = N_f(·, conj w_j)`.
///
/// The Gram matrix is `M_{kj} = [φ(w_j), φ(w_k)] = N_f(conj w_k, conj w_j)`,
/// i.e. the Nevanlinna Gram at the conjugated basis points. Difference
/// quotient matrices are computed on demand.
pub struct ModelCompression {
    f: FnHandle,
    basis_points: Vec<Complex64>,
    gram: KernelGram,
}

impl ModelCompression {
    pub fn new(f: FnHandle, basis_points: Vec<Complex64>) -> Result<Self> {
        if basis_points.is_empty() {
            return Err(Error::Domain("empty basis".into()));
        }
        for (j, w) in basis_points.iter().enumerate() {
            if w.im == 0.0 {
                return Err(Error::Domain(format!("basis point {w} on the real axis")));
            }
            if basis_points[..j].iter().any(|u| (u - w).norm() <= DIAG_TOL * (1.0 + w.norm())) {
                return Err(Error::Domain(format!("basis point {w} repeated")));
            }
        }
        let conj: Vec<Complex64> = basis_points.iter().map(|w| w.conj()).collect();
        let gram = gram_matrix(|z, w| nevanlinna_kernel(&*f, z, w), &conj)?;
        Ok(Self { f, basis_points, gram })
    }

    /// Basis `{±(k+1)·i·h₀ : k < n/2}` (an odd `n` drops the last lower point).
    pub fn default_basis(n: usize, h0: f64) -> Vec<Complex64> {
        (0..n)
            .map(|j| {
                let k = (j / 2 + 1) as f64;
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(0.0, sign * k * h0)
            })
            .collect()
    }

    pub fn function(&self) -> &FnHandle {
        &self.f
    }

    pub fn basis_points(&self) -> &[Complex64] {
        &self.basis_points
    }

    pub fn gram(&self) -> &KernelGram {
        &self.gram
    }

    fn index_of(&self, w: Complex64) -> Result<usize> {
        self.basis_points
            .iter()
            .position(|u| (u - w).norm() <= DIAG_TOL * (1.0 + w.norm()))
            .ok_or_else(|| Error::Domain(format!("{w} is not a basis point")))
    }

    /// `φ(w)(x) = N_f(x, conj w)`.
    pub fn kernel_function(&self, w: Complex64, x: Complex64) -> Result<Complex64> {
        nevanlinna_kernel(&*self.f, x, w.conj())
    }

    /// `Σ_j c_j φ(w_j)(x)`.
    pub fn represent(&self, coeffs: &[Complex64], x: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, w) in coeffs.iter().zip(&self.basis_points) {
            if *c != Complex64::new(0.0, 0.0) {
                acc += c * self.kernel_function(*w, x)?;
            }
        }
        Ok(acc)
    }

    /// `(D_w φ(w))(x) = (φ(w)(x) − f′(w)) / (x − w)`, `f″(w)/2` at `x = w`.
    fn derivative_column_value(&self, w: Complex64, x: Complex64) -> Result<Complex64> {
        if (x - w).norm() <= DIAG_TOL * (1.0 + w.norm()) {
            return Ok(self.f.second_derivative(w)? / 2.0);
        }
        Ok((self.kernel_function(w, x)? - self.f.derivative(w)?) / (x - w))
    }

    /// Coefficients of `D_w φ(w)` from the Gram system `M c = (ψ(conj w_k))_k`.
    fn derivative_column(&self, w: Complex64) -> Result<DVector<Complex64>> {
        let n = self.basis_points.len();
        let rhs = DVector::from_iterator(
            n,
            self.basis_points
                .iter()
                .map(|wk| self.derivative_column_value(w, wk.conj()))
                .collect::<Result<Vec<_>>>()?,
        );
        let m = &self.gram.matrix;
        if self.gram.inertia.2 == 0 {
            if let Some(sol) = m.clone().lu().solve(&rhs) {
                return Ok(sol);
            }
        }
        let rho = self.gram.spectral_radius().max(1.0);
        let pinv = m
            .clone()
            .pseudo_inverse(INERTIA_REL_TOL * rho)
            .map_err(|e| Error::Numeric(format!("pseudo-inverse failed: {e}")))?;
        let sol = &pinv * &rhs;
        let resid = (m * &sol - &rhs).camax();
        if resid > 1e-8 * (rhs.camax() + rho * sol.camax()).max(1e-300) {
            return Err(Error::Rank(format!(
                "Gram matrix is singular (n₀ = {}) and D_w φ(w) is not in its range (residual {resid:e}); \
                 choose a different point set",
                self.gram.inertia.2
            )));
        }
        Ok(sol)
    }
}

/// Matrix of `D_w` on `span{φ(w_j)}`. Columns for `u ≠ w` come from the
/// exact action `D_w φ(u) = (φ(w) − φ(u)) / (w − u)`.
pub fn compress_difference_quotient(mc: &ModelCompression, w: Complex64) -> Result<DMatrix<Complex64>> {
    let iw = mc.index_of(w)?;
    let w = mc.basis_points[iw];
    let n = mc.basis_points.len();
    let mut out = DMatrix::zeros(n, n);
    for (j, &u) in mc.basis_points.iter().enumerate() {
        if j == iw {
            out.set_column(j, &mc.derivative_column(w)?);
        } else {
            let d = w - u;
            out[(iw, j)] = 1.0 / d;
            out[(j, j)] = -1.0 / d;
        }
    }
    Ok(out)
}

/// `f(ζ)` recovered as `conj f(ζ₀) + (ζ − conj ζ₀)·[φ(ζ), φ(ζ₀)]`, where the
/// inner product is the kernel value `φ(ζ)(conj ζ₀) = N_f(conj ζ₀, conj ζ)`.
pub fn realize_reconstruct(mc: &ModelCompression, zeta0: Complex64, zeta: Complex64) -> Result<Complex64> {
    let z0 = mc.basis_points[mc.index_of(zeta0)?];
    let pairing = mc.kernel_function(zeta, z0.conj())?;
    Ok(mc.f.value(z0)?.conj() + (zeta - z0.conj()) * pairing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funclib::RationalFunction;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rational(num: &[f64], den: &[f64]) -> FnHandle {
        Arc::new(RationalFunction::from_real(num, den).unwrap())
    }

    #[test]
    fn square_derivative_quotient_is_constant_one() {
        let mc = ModelCompression::new(rational(&[0.0, 0.0, 1.0], &[1.0]), vec![c(0.0, 1.0), c(0.0, 2.0)]).unwrap();
        let d = compress_difference_quotient(&mc, c(0.0, 2.0)).unwrap();
        let col: Vec<Complex64> = d.column(0).iter().copied().collect();
        for x in [c(0.3, 0.5), c(-2.0, 1.0), c(5.0, -3.0)] {
            assert!((mc.represent(&col, x).unwrap() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_single_point_is_zero() {
        let mc = ModelCompression::new(rational(&[0.0, 1.0], &[1.0]), vec![c(0.0, 1.0)]).unwrap();
        let d = compress_difference_quotient(&mc, c(0.0, 1.0)).unwrap();
        assert!(d[(0, 0)].norm() < 1e-14);
    }

    #[test]
    fn identity_larger_basis_columns_vanish() {
        let mc = ModelCompression::new(rational(&[0.0, 1.0], &[1.0]), ModelCompression::default_basis(4, 1.0)).unwrap();
        for &w in mc.basis_points() {
            let d = compress_difference_quotient(&mc, w).unwrap();
            for j in 0..4 {
                let col: Vec<Complex64> = d.column(j).iter().copied().collect();
                assert!(mc.represent(&col, c(0.7, 1.3)).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cube_resolvent_identity() {
        let mc = ModelCompression::new(rational(&[0.0, 0.0, 0.0, 1.0], &[1.0]), vec![c(0.0, 1.0), c(0.0, 2.0), c(1.0, 1.0)])
            .unwrap();
        let (l, m) = (c(0.0, 1.0), c(0.0, 2.0));
        let dl = compress_difference_quotient(&mc, l).unwrap();
        let dm = compress_difference_quotient(&mc, m).unwrap();
        let r = &dl - &dm - (&dl * &dm) * (l - m);
        assert!(r.camax() < 1e-8, "{}", r.camax());
    }

    #[test]
    fn reconstruction_examples() {
        let sq = ModelCompression::new(rational(&[0.0, 0.0, 1.0], &[1.0]), vec![c(0.0, 1.0)]).unwrap();
        assert!((realize_reconstruct(&sq, c(0.0, 1.0), c(0.0, 3.0)).unwrap() + 9.0).norm() < 1e-10);
        let id = ModelCompression::new(rational(&[0.0, 1.0], &[1.0]), vec![c(0.5, 1.0)]).unwrap();
        assert!((realize_reconstruct(&id, c(0.5, 1.0), c(-2.0, 0.3)).unwrap() - c(-2.0, 0.3)).norm() < 1e-12);
        let inv = ModelCompression::new(rational(&[-1.0], &[0.0, 1.0]), vec![c(0.0, 1.0)]).unwrap();
        assert!((realize_reconstruct(&inv, c(0.0, 1.0), c(0.0, 2.0)).unwrap() - c(0.0, 0.5)).norm() < 1e-12);
        assert!(matches!(realize_reconstruct(&inv, c(0.0, 2.0), c(0.0, 2.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn singular_gram_in_range_uses_pseudo_inverse() {
        // f = z² has a two-dimensional model space; three points make the
        // Gram singular but every derivative column stays representable
        let mc = ModelCompression::new(
            rational(&[0.0, 0.0, 1.0], &[1.0]),
            vec![c(0.0, 1.0), c(0.0, 2.0), c(1.0, 1.0)],
        )
        .unwrap();
        assert_eq!(mc.gram().inertia.2, 1);
        let d = compress_difference_quotient(&mc, c(1.0, 1.0)).unwrap();
        let col: Vec<Complex64> = d.column(2).iter().copied().collect();
        // D_w D_w z² = 1
        assert!((mc.represent(&col, c(0.4, -0.7)).unwrap() - 1.0).norm() < 1e-10);
    }

    #[test]
    fn singular_gram_outside_range_is_rank_error() {
        // N_f(−i, −i) = 0 for f = z², but D_i φ(i) ≡ 1
        let mc = ModelCompression::new(rational(&[0.0, 0.0, 1.0], &[1.0]), vec![c(0.0, 1.0)]).unwrap();
        assert!(matches!(compress_difference_quotient(&mc, c(0.0, 1.0)), Err(Error::Rank(_))));
    }
}

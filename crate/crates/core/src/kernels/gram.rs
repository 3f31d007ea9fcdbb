use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::kernel::schur_kernel;
use crate::error::{Error, Result};
use crate::halfplane::{FromFn, Holomorphic};

/// Eigenvalues with `|λ| < INERTIA_REL_TOL · max(1, ρ)` count as zero.
pub const INERTIA_REL_TOL: f64 = 1e-9;

/// Hermitian Gram matrix `G_{jk} = K(z_j, z_k)` with its inertia.
#[derive(Debug, Clone)]
pub struct KernelGram {
    pub points: Vec<Complex64>,
    /// Symmetrized `(G + G*)/2`.
    pub matrix: DMatrix<Complex64>,
    /// `(n₊, n₋, n₀)`.
    pub inertia: (usize, usize, usize),
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `max |G − G*|` before symmetrization.
    pub hermiticity_defect: f64,
}

impl KernelGram {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    pub fn negative_index(&self) -> usize {
        self.inertia.1
    }

    /// Builds the Gram record from an already assembled matrix.
    pub fn from_matrix(points: Vec<Complex64>, raw: DMatrix<Complex64>) -> Result<Self> {
        let n = raw.nrows();
        let mut defect: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                defect = defect.max((raw[(j, k)] - raw[(k, j)].conj()).norm());
            }
        }
        let matrix = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
        if matrix.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Numeric("non-finite Gram entry".into()));
        }
        let mut eigenvalues: Vec<f64> = matrix.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        eigenvalues.sort_by(f64::total_cmp);
        let rho = eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        let cut = INERTIA_REL_TOL * rho.max(1.0);
        let pos = eigenvalues.iter().filter(|&&e| e > cut).count();
        let neg = eigenvalues.iter().filter(|&&e| e < -cut).count();
        Ok(Self { points, matrix, inertia: (pos, neg, n - pos - neg), eigenvalues, hermiticity_defect: defect })
    }
}

/// Assembles `K(z_j, z_k)` (in parallel over entries) and computes the
/// inertia of the symmetrized matrix.
pub fn gram_matrix<K>(kernel: K, points: &[Complex64]) -> Result<KernelGram>
where
    K: Fn(Complex64, Complex64) -> Result<Complex64> + Sync,
{
    if points.is_empty() {
        return Err(Error::Domain("Gram matrix of an empty point set".into()));
    }
    for (j, a) in points.iter().enumerate() {
        if points[..j].iter().any(|b| a == b) {
            return Err(Error::Domain(format!("repeated Gram point {a}")));
        }
    }
    let n = points.len();
    let entries: Vec<Complex64> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (j, k) = (idx / n, idx % n);
            let (zeta, w) = (points[j], points[k]);
            kernel(zeta, w).map_err(|e| Error::Kernel { zeta, w, source: Box::new(e) })
        })
        .collect::<Result<_>>()?;
    let raw = DMatrix::from_row_slice(n, n, &entries);
    KernelGram::from_matrix(points.to_vec(), raw)
}

/// Gram of `s_v` with `v = h₁/h₂`.
pub fn bv_kernel_gram<H1, H2>(h1: &H1, h2: &H2, points: &[Complex64]) -> Result<KernelGram>
where
    H1: Holomorphic + ?Sized,
    H2: Holomorphic + ?Sized,
{
    let v = FromFn(|z: Complex64| {
        let d = h2.value(z)?;
        if d.norm() < 1e-300 {
            return Err(Error::Pole { at: z, pole: z });
        }
        Ok(h1.value(z)? / d)
    });
    gram_matrix(|z, w| schur_kernel(&v, z, w), points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funclib::RationalFunction;
    use crate::halfplane::S0Function;
    use crate::kernels::nevanlinna_kernel;
    use crate::sampling;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_gives_all_ones() {
        let f = RationalFunction::from_real(&[0.0, 1.0], &[1.0]).unwrap();
        let g = gram_matrix(|z, w| nevanlinna_kernel(&f, z, w), &[c(0.0, 1.0), c(0.0, 2.0), c(0.0, 5.0)]).unwrap();
        assert!(g.matrix.iter().all(|v| (v - 1.0).norm() < 1e-14));
        assert_eq!(g.inertia, (1, 0, 2));
    }

    #[test]
    fn square_has_one_negative_square() {
        let f = RationalFunction::from_real(&[0.0, 0.0, 1.0], &[1.0]).unwrap();
        let g = gram_matrix(|z, w| nevanlinna_kernel(&f, z, w), &[c(0.0, 1.0), c(0.0, 2.0)]).unwrap();
        assert!(g.matrix[(0, 0)].norm() < 1e-15);
        assert!((g.matrix[(0, 1)] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((g.matrix[(1, 0)] - c(0.0, 1.0)).norm() < 1e-14);
        assert_eq!(g.inertia, (1, 1, 0));
        assert!((g.eigenvalues[0] + 1.0).abs() < 1e-14 && (g.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn herglotz_gram_is_positive() {
        let f = RationalFunction::from_real(&[-1.0], &[0.0, 1.0]).unwrap();
        let pts = sampling::uniform_box(6, 11, (-3.0, 3.0), (0.2, 3.0));
        let g = gram_matrix(|z, w| nevanlinna_kernel(&f, z, w), &pts).unwrap();
        assert_eq!(g.inertia.1, 0);
        assert!(g.eigenvalues.iter().all(|&e| e >= -1e-10));
        assert!(g.hermiticity_defect < 1e-12);
    }

    #[test]
    fn errors_name_the_pair() {
        let f = RationalFunction::from_real(&[1.0], &[0.0, 1.0]).unwrap();
        let err = gram_matrix(|z, w| nevanlinna_kernel(&f, z, w), &[c(0.0, 1.0), c(0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::Kernel { .. }));
        assert!(gram_matrix(|z, w| nevanlinna_kernel(&f, z, w), &[c(0.0, 1.0), c(0.0, 1.0)]).is_err());
    }

    #[test]
    fn quotient_kernel_inertia() {
        let h1 = S0Function::blaschke(&[Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]).unwrap();
        let h2 = S0Function::blaschke(&[Complex64::from_polar(1.0, 3.0 * std::f64::consts::FRAC_PI_4)]).unwrap();
        let pts = sampling::separated_box(6, 5, (-2.0, 2.0), (0.3, 2.0), 0.2);
        let g = bv_kernel_gram(&h1, &h2, &pts).unwrap();
        assert_eq!(g.inertia, (1, 1, 4));

        let one = S0Function::constant(c(1.0, 0.0)).unwrap();
        assert_eq!(bv_kernel_gram(&h1, &one, &pts).unwrap().inertia.1, 0);
        let inv = bv_kernel_gram(&one, &h2, &pts).unwrap();
        assert_eq!(inv.inertia.0, 0);
        assert_eq!(inv.inertia.1, 1);
    }
}

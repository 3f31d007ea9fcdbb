use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factorization::coprime_check;
use crate::halfplane::quadrature::integrate_line;
use crate::halfplane::{Holomorphic, QuadratureConfig, S0Function};

/// Outcome of [`model_space_rank_test`].
#[derive(Debug, Clone)]
pub struct RankTest {
    pub rank: usize,
    pub expected: usize,
    pub coprime: bool,
    pub pass: bool,
    /// Ascending eigenvalues of the combined Gram.
    pub eigenvalues: Vec<f64>,
}

/// Eigenvalues below this fraction of the largest count as zero.
const RANK_REL_TOL: f64 = 1e-8;

/// Numerical rank of `{s_{h₁}(·, z_j)} ∪ {s_{h₂}(·, z_j)}` under the boundary
/// pairing `∫_ℝ g₁ conj g₂ dx`. For finite Blaschke symbols the two families
/// span spaces of dimensions `n₁` and `n₂`; the union has rank `n₁ + n₂`
/// exactly when the spaces meet only in zero.
pub fn model_space_rank_test(h1: &S0Function, h2: &S0Function, points: &[Complex64]) -> Result<RankTest> {
    if !h1.is_finite_blaschke() || !h2.is_finite_blaschke() {
        return Err(Error::Domain("rank test needs finite Blaschke symbols".into()));
    }
    let (n1, n2) = (h1.blaschke_part().degree(), h2.blaschke_part().degree());
    let expected = n1 + n2;
    if points.len() < expected + 2 {
        return Err(Error::Domain(format!("rank test needs at least {} points, got {}", expected + 2, points.len())));
    }
    if let Some(z) = points.iter().find(|z| !(z.im > 0.0)) {
        return Err(Error::Domain(format!("rank test point {z} not in the upper half-plane")));
    }

    let symbols = [h1, h2];
    let members: Vec<(usize, Complex64, Complex64)> = symbols
        .iter()
        .enumerate()
        .flat_map(|(s, h)| points.iter().map(move |&z| (s, z, h.value(z).map(|v| v.conj()))))
        .map(|(s, z, hz)| hz.map(|hz| (s, z, hz)))
        .collect::<Result<_>>()?;
    let m = members.len();

    // s_h(x, z) on the real line; the tangent map needs g·conj g·(1 + t²)
    let row = |x: f64| -> Vec<Complex64> {
        let xc = Complex64::new(x, 0.0);
        let hx = [h1.value(xc), h2.value(xc)];
        let vals: Vec<Complex64> = members
            .iter()
            .map(|&(s, z, hz)| match &hx[s] {
                Ok(h) => (1.0 - h * hz) / (-Complex64::i() * (xc - z.conj())),
                Err(_) => Complex64::new(f64::NAN, 0.0),
            })
            .collect();
        let w = 1.0 + x * x;
        let mut out = Vec::with_capacity(m * (m + 1) / 2);
        for a in 0..m {
            for b in a..m {
                out.push(vals[a] * vals[b].conj() * w);
            }
        }
        out
    };
    let breaks: Vec<f64> = points.iter().map(|z| z.re).collect();
    let integral = integrate_line(row, &breaks, &QuadratureConfig::default())?;

    let mut gram = DMatrix::<Complex64>::zeros(m, m);
    let mut idx = 0;
    for a in 0..m {
        for b in a..m {
            gram[(a, b)] = integral.value[idx];
            gram[(b, a)] = integral.value[idx].conj();
            idx += 1;
        }
    }
    let mut eigenvalues: Vec<f64> = gram.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let top = eigenvalues.last().copied().unwrap_or(0.0);
    let rank = eigenvalues.iter().filter(|&&e| e > RANK_REL_TOL * top).count();
    let coprime = coprime_check(h1, h2, 1e-8).coprime;
    let pass = if coprime { rank == expected } else { rank < expected };
    Ok(RankTest { rank, expected, coprime, pass, eigenvalues })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pts(n: usize) -> Vec<Complex64> {
        sampling::separated_box(n, 21, (-2.0, 2.0), (0.4, 2.5), 0.3)
    }

    #[test]
    fn disjoint_zeros_give_full_rank() {
        let a = S0Function::blaschke(&[Complex64::from_polar(1.0, FRAC_PI_4)]).unwrap();
        let b = S0Function::blaschke(&[Complex64::from_polar(1.0, 3.0 * FRAC_PI_4)]).unwrap();
        let r = model_space_rank_test(&a, &b, &pts(4)).unwrap();
        assert_eq!((r.rank, r.expected), (2, 2));
        assert!(r.pass);
    }

    #[test]
    fn identical_symbols_collapse() {
        let a = S0Function::blaschke(&[c(0.0, 1.0)]).unwrap();
        let r = model_space_rank_test(&a, &a, &pts(4)).unwrap();
        assert_eq!(r.rank, 1);
        assert!(!r.coprime && r.pass);
    }

    #[test]
    fn nested_spaces() {
        let a = S0Function::blaschke(&[c(0.0, 1.0), c(0.0, 2.0)]).unwrap();
        let b = S0Function::blaschke(&[c(0.0, 1.0)]).unwrap();
        let r = model_space_rank_test(&a, &b, &pts(5)).unwrap();
        assert_eq!((r.rank, r.expected), (2, 3));
        assert!(r.pass);
    }

    #[test]
    fn rejects_non_blaschke_and_few_points() {
        let a = S0Function::blaschke(&[c(0.0, 1.0)]).unwrap();
        assert!(model_space_rank_test(&a, &a, &pts(3)).is_err());
        let e = S0Function::new(
            c(1.0, 0.0),
            crate::halfplane::BlaschkeProduct::identity(),
            crate::halfplane::SingularInner::new(vec![], 1.0).unwrap(),
            None,
        )
        .unwrap();
        assert!(matches!(model_space_rank_test(&a, &e, &pts(5)), Err(Error::Domain(_))));
    }
}

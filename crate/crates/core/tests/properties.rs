use std::sync::Arc;

use nsym_model::factorization::{helson_decompose, reconstruct_from_pair};
use nsym_model::funclib::{Polynomial, RationalFunction};
use nsym_model::halfplane::{from_fn, Density, FnHandle, HerglotzRepresentation, Holomorphic, QuadratureConfig, S0Function};
use nsym_model::kernels::{
    compress_difference_quotient, difference_quotient, gram_matrix, nevanlinna_kernel, verify_conjugation_identity,
    verify_dw_symbol_identity, verify_schur_diagonal, verify_sum_decomposition, ModelCompression,
};
use nsym_model::sampling::{probes_both, stratified_upper};
use nsym_model::spectral::{count_upper_roots, estimate_negative_index, stieltjes_invert, stieltjes_invert_fn, ContourSpec, DEFAULT_SCHEDULE};
use nsym_model::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scaled(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

fn upper_zero() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, 0.2..2.0f64).prop_map(|(x, y)| c(x, y))
}

/// Real polynomial of degree 1..=3 with leading coefficient of modulus ≥ 0.5.
fn real_poly() -> impl Strategy<Value = Vec<f64>> {
    (1usize..=3, prop::collection::vec(-2.0..2.0f64, 3), 0.5..2.0f64, any::<bool>()).prop_map(|(d, low, lead, neg)| {
        let mut coeffs: Vec<f64> = low[..d].to_vec();
        coeffs.push(if neg { -lead } else { lead });
        coeffs
    })
}

fn admissible_pairs(n: usize, seed: u64, ok: impl Fn(Complex64) -> bool) -> Vec<(Complex64, Complex64)> {
    let pts: Vec<Complex64> = probes_both(20 * n, seed).into_iter().filter(|&z| ok(z)).take(2 * n).collect();
    pts.chunks_exact(2).map(|p| (p[0], p[1])).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn blaschke_symbols_satisfy_kernel_identities(zeros in prop::collection::vec(upper_zero(), 1..=3), seed in 0u64..1000) {
        let h = S0Function::blaschke(&zeros).unwrap();
        let pairs = admissible_pairs(20, seed, |z| h.value(z).map(|v| (1.0 + v).norm() > 1e-6).unwrap_or(false));
        let r = verify_conjugation_identity(&h, &pairs, 1e-9);
        prop_assert!(r.passed(), "{:?}", r);
        let probes: Vec<Complex64> = pairs.iter().map(|p| p.0).collect();
        let r = verify_dw_symbol_identity(&h, c(0.3, 2.7), &probes, 1e-8).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
        let diag: Vec<Complex64> = probes.iter().copied().filter(|&z| h.value(z).unwrap().norm() > 1e-3).take(8).collect();
        let r = verify_schur_diagonal(&h, &diag, 1e-8);
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn polynomial_helson_roundtrip_and_sum_decomposition(coeffs in real_poly(), seed in 0u64..1000) {
        let f = RationalFunction::from_real(&coeffs, &[1.0]).unwrap();
        let pair = helson_decompose(&f).unwrap();
        prop_assert!(pair.certificate < 1e-6);
        let pairs = admissible_pairs(20, seed, |z| reconstruct_from_pair(&pair, z).is_ok());
        for &(z, _) in &pairs {
            prop_assert!(scaled(reconstruct_from_pair(&pair, z).unwrap(), f.value(z).unwrap()) < 1e-6);
        }
        let r = verify_sum_decomposition(&pair, &f, &pairs, 1e-8);
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn polynomial_index_matches_root_count(coeffs in real_poly(), wx in -3.0..3.0f64, wy in 0.2..3.0f64) {
        let f = RationalFunction::from_real(&coeffs, &[1.0]).unwrap();
        let est = estimate_negative_index(&f, &DEFAULT_SCHEDULE, 3).unwrap();
        prop_assert!(est.stabilized);
        let n = count_upper_roots(&f, c(wx, -wy), &ContourSpec::default()).unwrap();
        prop_assert_eq!(n, est.kappa);
        // For a real polynomial of degree d with leading coefficient a the
        // count is ⌊d/2⌋, plus one for odd d with a < 0.
        let d = coeffs.len() - 1;
        let lead_negative = *coeffs.last().unwrap() < 0.0;
        prop_assert_eq!(est.kappa, d / 2 + usize::from(d % 2 == 1 && lead_negative));
    }

    #[test]
    fn index_invariant_under_upper_half_plane_automorphisms(
        coeffs in real_poly(),
        a in 0.3..3.0f64,
        b in -2.0..2.0f64,
        c0 in -1.0..1.0f64,
    ) {
        // m(ζ) = (aζ + b)/(c0ζ + d) with ad − bc0 = 1 maps ℂ⁺ onto itself.
        let d = (1.0 + b * c0) / a;
        let f = RationalFunction::from_real(&coeffs, &[1.0]).unwrap();
        let base = estimate_negative_index(&f, &DEFAULT_SCHEDULE, 5).unwrap();
        let fc = f.clone();
        let composed = from_fn(move |z| fc.value((z * a + b) / (z * c0 + d)));
        let moved = estimate_negative_index(&*composed, &DEFAULT_SCHEDULE, 5).unwrap();
        prop_assert_eq!(moved.kappa, base.kappa);
    }

    #[test]
    fn gram_negative_count_grows_with_points(coeffs in real_poly(), seed in 0u64..1000) {
        let f = RationalFunction::from_real(&coeffs, &[1.0]).unwrap();
        let pts = stratified_upper(12, seed);
        let mut last = 0;
        for n in 1..=pts.len() {
            let g = gram_matrix(|z, w| nevanlinna_kernel(&f, z, w), &pts[..n]).unwrap();
            prop_assert!(g.negative_index() >= last);
            last = g.negative_index();
        }
    }

    #[test]
    fn herglotz_grams_are_positive(a in -1.0..1.0f64, b in 0.0..1.0f64, t in -2.0..2.0f64, m in 0.1..1.0f64, seed in 0u64..1000) {
        let q = HerglotzRepresentation::new(a, b, vec![(t, m)], Some(Density::boxed(-1.0, 0.5, 0.7).unwrap()), QuadratureConfig::default()).unwrap();
        let g = gram_matrix(|z, w| nevanlinna_kernel(&q, z, w), &stratified_upper(6, seed)).unwrap();
        prop_assert!(g.eigenvalues[0] >= -1e-10);
        prop_assert_eq!(g.negative_index(), 0);
    }

    #[test]
    fn stieltjes_of_atoms_is_a_poisson_sum(t1 in -2.0..-0.5f64, t2 in 0.5..2.0f64, m1 in 0.1..2.0f64, m2 in 0.1..2.0f64, b in 0.0..1.0f64) {
        let q = HerglotzRepresentation::new(0.2, b, vec![(t1, m1), (t2, m2)], None, QuadratureConfig::default()).unwrap();
        let eps = 0.05;
        let grid: Vec<f64> = (0..21)
            .map(|k| -3.0 + 0.3 * k as f64)
            .filter(|x| (x - t1).abs() >= 10.0 * eps && (x - t2).abs() >= 10.0 * eps)
            .collect();
        let got = stieltjes_invert(&q, &grid, eps).unwrap();
        let via_fn = stieltjes_invert_fn(&q, &grid, eps).unwrap();
        for ((x, g), h) in grid.iter().zip(&got).zip(&via_fn) {
            let poisson = |t: f64, m: f64| m * eps / ((t - x).powi(2) + eps * eps);
            let expected = (b * eps + poisson(t1, m1) + poisson(t2, m2)) / std::f64::consts::PI;
            prop_assert!((g - expected).abs() < 1e-9 * (1.0 + expected));
            prop_assert!((g - h).abs() < 1e-9 * (1.0 + expected));
        }
    }
}

#[test]
fn compressed_difference_quotient_acts_on_kernel_columns() {
    let f = RationalFunction::from_real(&[0.0, -1.0, 0.0, 1.0], &[1.0, 0.0, 1.0]).unwrap();
    let handle: FnHandle = Arc::new(f.clone());
    let basis = ModelCompression::default_basis(f.degree(), 0.7);
    let mc = ModelCompression::new(handle, basis.clone()).unwrap();
    for &w in &basis {
        let d = compress_difference_quotient(&mc, w).unwrap();
        for j in 0..basis.len() {
            let column: Vec<Complex64> = d.column(j).iter().copied().collect();
            for x in [c(0.3, 2.2), c(-1.1, -0.4), c(2.0, 0.6)] {
                let lhs = mc.represent(&column, x).unwrap();
                let kj = |z| mc.kernel_function(basis[j], z);
                let rhs = (kj(x).unwrap() - kj(w).unwrap()) / (x - w);
                assert!(scaled(lhs, rhs) < 1e-9, "w = {w}, column {j}, x = {x}: {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn difference_quotient_matches_polynomial_division() {
    // (ζ³ − λ³)/(ζ − λ) = ζ² + λζ + λ².
    let f = RationalFunction::polynomial(Polynomial::from_real(&[0.0, 0.0, 0.0, 1.0]));
    let l = c(0.4, 1.2);
    for z in probes_both(10, 9) {
        let expected = z * z + l * z + l * l;
        assert!(scaled(difference_quotient(&f, l, z).unwrap(), expected) < 1e-12);
    }
    assert!(scaled(difference_quotient(&f, l, l).unwrap(), 3.0 * l * l) < 1e-12);
}

#[test]
fn real_boundary_pairs_have_trivial_outer_parts() {
    for coeffs in [vec![0.0, 1.0], vec![1.0, 0.0, 1.0], vec![0.0, -1.0, 0.0, 2.0]] {
        let f = RationalFunction::from_real(&coeffs, &[1.0]).unwrap();
        let pair = helson_decompose(&f).unwrap();
        assert!(pair.h1.outer_part().is_none() && pair.h2.outer_part().is_none(), "{coeffs:?}");
    }
}

//! Seeded point generators.
//!
//! All randomness goes through ChaCha8 (a counter-based stream cipher
//! generator) seeded from a single `u64`, so sequences are reproducible
//! across platforms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const STRATA: usize = 8;

/// Nested stratified points in ℂ⁺: imaginary parts log-uniform in
/// `[1e-1, 1e1]` cycling through eight strata, real parts uniform in
/// `[-5, 5]`. The first `n` points of a longer draw equal a draw of `n`.
pub fn stratified_upper(n: usize, seed: u64) -> Vec<Complex64> {
    let mut r = rng(seed);
    (0..n)
        .map(|k| {
            let stratum = (k % STRATA) as f64;
            let u: f64 = (stratum + r.gen::<f64>()) / STRATA as f64;
            let y = 10f64.powf(-1.0 + 2.0 * u);
            let x = r.gen_range(-5.0..5.0);
            Complex64::new(x, y)
        })
        .collect()
}

/// Uniform points in the box `[x_lo, x_hi] × [y_lo, y_hi]`.
pub fn uniform_box(n: usize, seed: u64, x: (f64, f64), y: (f64, f64)) -> Vec<Complex64> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| Complex64::new(r.gen_range(x.0..x.1), r.gen_range(y.0..y.1)))
        .collect()
}

/// Uniform points in a box with pairwise distances at least `min_dist`
/// (rejection sampling).
pub fn separated_box(n: usize, seed: u64, x: (f64, f64), y: (f64, f64), min_dist: f64) -> Vec<Complex64> {
    let mut r = rng(seed);
    let mut pts: Vec<Complex64> = Vec::with_capacity(n);
    while pts.len() < n {
        let z = Complex64::new(r.gen_range(x.0..x.1), r.gen_range(y.0..y.1));
        if pts.iter().all(|p| (p - z).norm() >= min_dist) {
            pts.push(z);
        }
    }
    pts
}

/// Off-axis probe points mixing both half-planes.
pub fn probes_both(n: usize, seed: u64) -> Vec<Complex64> {
    let mut r = rng(seed);
    (0..n)
        .map(|k| {
            let y = 10f64.powf(r.gen_range(-0.7..0.7));
            let z = Complex64::new(r.gen_range(-3.0..3.0), y);
            if k % 2 == 0 {
                z
            } else {
                z.conj()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stratified_is_nested_and_deterministic() {
        let a = stratified_upper(20, 7);
        let b = stratified_upper(10, 7);
        assert_eq!(&a[..10], &b[..]);
        assert!(a.iter().all(|z| z.im >= 0.1 && z.im <= 10.0 && z.re.abs() <= 5.0));
    }

    #[test]
    fn separated_points_respect_distance() {
        let p = separated_box(6, 3, (-2.0, 2.0), (0.3, 2.0), 0.1);
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                assert!((p[i] - p[j]).norm() >= 0.1);
            }
        }
    }
}

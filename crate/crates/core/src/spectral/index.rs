use num_complex::Complex64;

use super::contour::{count_upper_roots, ContourSpec};
use crate::error::{Error, Result};
use crate::funclib::RationalFunction;
use crate::halfplane::Holomorphic;
use crate::kernels::{gram_matrix, nevanlinna_kernel};
use crate::report::{IdentityReport, Status};
use crate::sampling;

/// Negative index `κ` read off Nevanlinna Gram inertia on growing nested
/// point sets.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexEstimate {
    pub kappa: usize,
    /// `(sample size, n₋)` per schedule entry.
    pub point_counts: Vec<(usize, usize)>,
    /// The last three counts agree.
    pub stabilized: bool,
}

pub const DEFAULT_SCHEDULE: [usize; 6] = [4, 8, 12, 16, 24, 32];

/// Draws nested stratified points in ℂ⁺ (skipping poles of `f`) and records
/// the number of negative eigenvalues of the Nevanlinna Gram per sample size.
pub fn estimate_negative_index<H: Holomorphic + ?Sized>(f: &H, schedule: &[usize], seed: u64) -> Result<IndexEstimate> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] > w[1]) || schedule[0] == 0 {
        return Err(Error::Domain(format!("schedule {schedule:?} must be nonempty, positive and nondecreasing")));
    }
    let need = *schedule.last().expect("nonempty");
    let pool: Vec<Complex64> = sampling::stratified_upper(2 * need + 32, seed)
        .into_iter()
        .filter(|&z| f.value(z).map(|v| v.re.is_finite() && v.im.is_finite()).unwrap_or(false))
        .take(need)
        .collect();
    if pool.len() < need {
        return Err(Error::Numeric(format!("only {} admissible sample points, need {need}", pool.len())));
    }
    let mut point_counts = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let g = gram_matrix(|z, w| nevanlinna_kernel(f, z, w), &pool[..n])?;
        point_counts.push((n, g.inertia.1));
    }
    let kappa = point_counts.last().expect("nonempty").1;
    let stabilized = point_counts.len() >= 3 && point_counts[point_counts.len() - 3..].iter().all(|&(_, k)| k == kappa);
    Ok(IndexEstimate { kappa, point_counts, stabilized })
}

/// Compares the number of solutions of `f = w` in ℂ⁺ with the negative
/// index for every witness. An index that has not stabilized makes the
/// report inconclusive.
pub fn verify_index_theorem(
    f: &RationalFunction,
    witnesses: &[Complex64],
    schedule: &[usize],
    contour: &ContourSpec,
    seed: u64,
) -> Result<IdentityReport> {
    let name = "index-root-count";
    let est = estimate_negative_index(f, schedule, seed)?;
    let counts: Vec<String> = est.point_counts.iter().map(|(n, k)| format!("{n}:{k}")).collect();
    let index_note = format!("κ = {} (n₋ by sample size {})", est.kappa, counts.join(", "));
    if !est.stabilized {
        let mut rep = IdentityReport::from_residual(name, witnesses.to_vec(), f64::NAN, 0.5).with_note(index_note);
        rep.status = Status::Inconclusive;
        return Ok(rep.with_note("negative index did not stabilize"));
    }
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    for &w in witnesses {
        let n = count_upper_roots(f, w, contour)?;
        worst = worst.max((n as f64 - est.kappa as f64).abs());
        notes.push(format!("w = {w}: {n} roots in ℂ⁺"));
    }
    let mut rep = IdentityReport::from_residual(name, witnesses.to_vec(), worst, 0.5).with_note(index_note);
    rep.notes.extend(notes);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn catalog_indices() {
        let inv = RationalFunction::from_real(&[-1.0], &[0.0, 1.0]).unwrap();
        let e = estimate_negative_index(&inv, &DEFAULT_SCHEDULE, 0).unwrap();
        assert_eq!(e.kappa, 0);
        assert!(e.stabilized);
        let sq = RationalFunction::from_real(&[0.0, 0.0, 1.0], &[1.0]).unwrap();
        assert_eq!(estimate_negative_index(&sq, &DEFAULT_SCHEDULE, 0).unwrap().kappa, 1);
        let cube = RationalFunction::from_real(&[0.0, 0.0, 0.0, 1.0], &[1.0]).unwrap();
        let e = estimate_negative_index(&cube, &DEFAULT_SCHEDULE, 3).unwrap();
        assert_eq!(e.kappa, 1);
        assert!(e.point_counts.windows(2).all(|w| w[0].1 <= w[1].1));
    }

    #[test]
    fn theorem_on_square_and_inverse() {
        let spec = ContourSpec::default();
        let sq = RationalFunction::from_real(&[0.0, 0.0, 1.0], &[1.0]).unwrap();
        let r = verify_index_theorem(&sq, &[c(0.0, -1.0), c(-2.0, -1.0), c(5.0, -3.0)], &DEFAULT_SCHEDULE, &spec, 0).unwrap();
        assert!(r.passed(), "{r:?}");
        let inv = RationalFunction::from_real(&[-1.0], &[0.0, 1.0]).unwrap();
        assert!(verify_index_theorem(&inv, &[c(0.0, -1.0)], &DEFAULT_SCHEDULE, &spec, 0).unwrap().passed());
    }

    #[test]
    fn short_schedule_is_inconclusive() {
        let sq = RationalFunction::from_real(&[0.0, 0.0, 1.0], &[1.0]).unwrap();
        let r = verify_index_theorem(&sq, &[c(0.0, -1.0)], &[4, 8], &ContourSpec::default(), 0).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
    }
}

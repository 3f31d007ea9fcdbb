use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Polynomial;
use crate::error::{Error, Result};

/// Roots of a polynomial with multiplicities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootSet {
    roots: Vec<(Complex64, usize)>,
}

/// Relative distance below which two computed roots are the same root.
pub const CLUSTER_TOL: f64 = 1e-8;

// Wider radius inside which nearby eigenvalues are merged when the
// derivative also vanishes at their centre (split multiple roots).
const MULTIPLE_ROOT_RADIUS: f64 = 1e-5;
const MULTIPLE_ROOT_DERIV_TOL: f64 = 1e-6;

impl RootSet {
    pub fn new(roots: Vec<(Complex64, usize)>) -> Result<Self> {
        if roots.iter().any(|&(_, m)| m == 0) {
            return Err(Error::Domain("root multiplicity must be positive".into()));
        }
        let scale = roots.iter().map(|(r, _)| r.norm()).fold(1.0, f64::max);
        for (i, (a, _)) in roots.iter().enumerate() {
            for (b, _) in &roots[i + 1..] {
                if (a - b).norm() < CLUSTER_TOL * scale {
                    return Err(Error::Domain(format!("roots {a} and {b} coincide")));
                }
            }
        }
        Ok(Self { roots })
    }

    /// Builds a root set from a plain list, clustering repeated entries.
    pub fn from_points(points: &[Complex64]) -> Self {
        let scale = points.iter().map(|r| r.norm()).fold(1.0, f64::max);
        let mut roots: Vec<(Complex64, usize)> = Vec::new();
        for &p in points {
            match roots
                .iter_mut()
                .find(|(r, _)| (r - p).norm() < CLUSTER_TOL * scale)
            {
                Some(entry) => entry.1 += 1,
                None => roots.push((p, 1)),
            }
        }
        Self { roots }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Complex64, usize)> {
        self.roots.iter()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Sum of multiplicities.
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|&(_, m)| m).sum()
    }

    /// Every root repeated according to its multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|&(r, m)| std::iter::repeat(r).take(m))
            .collect()
    }

    pub fn filter<F: Fn(Complex64) -> bool>(&self, keep: F) -> Self {
        Self {
            roots: self.roots.iter().copied().filter(|&(r, _)| keep(r)).collect(),
        }
    }

    /// Nearest root to `z`, if any.
    pub fn nearest(&self, z: Complex64) -> Option<Complex64> {
        self.roots
            .iter()
            .map(|&(r, _)| r)
            .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()))
    }
}

/// All roots of `p` via eigenvalues of the companion matrix, each polished by
/// one Newton step and clustered into multiplicities.
///
/// `tol` bounds the relative residual `|p(r)| / Σ|a_k||r|^k` accepted for
/// every returned root.
pub fn poly_roots(p: &Polynomial, tol: f64) -> Result<RootSet> {
    let degree = p
        .degree()
        .ok_or_else(|| Error::Domain("roots of the zero polynomial".into()))?;
    if degree == 0 {
        return Ok(RootSet::empty());
    }
    let coeffs = p.coeffs();
    let zero_roots = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = &coeffs[zero_roots..];
    let n = reduced.len() - 1;

    let mut found: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); zero_roots];
    if n == 1 {
        found.push(-reduced[0] / reduced[1]);
    } else if n > 1 {
        // z = s·y with s the geometric mean of the root moduli.
        let s = (reduced[0].norm() / reduced[n].norm()).powf(1.0 / n as f64);
        let s = if s.is_finite() && s > 0.0 { s } else { 1.0 };
        let lead = reduced[n];
        let mut companion = DMatrix::<Complex64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for (i, c) in reduced[..n].iter().enumerate() {
            companion[(i, n - 1)] = -c / lead * s.powi(i as i32 - n as i32);
        }
        let eigen = companion
            .try_schur(f64::EPSILON, 10_000)
            .and_then(|schur| schur.eigenvalues())
            .ok_or_else(|| Error::Numeric(format!("eigenvalue iteration did not converge for {p}")))?;
        found.extend(eigen.iter().map(|&y| y * s));
    }

    let dp = p.derivative();
    for r in found.iter_mut().skip(zero_roots) {
        let d = dp.eval(*r);
        if d.norm() > 0.0 {
            let candidate = *r - p.eval(*r) / d;
            if candidate.is_finite() && p.eval(candidate).norm() < p.eval(*r).norm() {
                *r = candidate;
            }
        }
    }

    let roots = cluster(p, &dp, &found);
    for &(r, _) in &roots {
        let residual = p.eval(r).norm() / p.abs_eval(r).max(f64::MIN_POSITIVE);
        if !(residual <= tol) {
            return Err(Error::Numeric(format!(
                "root {r} of {p} has relative residual {residual:e} above {tol:e}"
            )));
        }
    }
    Ok(RootSet { roots })
}

fn cluster(p: &Polynomial, dp: &Polynomial, found: &[Complex64]) -> Vec<(Complex64, usize)> {
    let scale = found.iter().map(|r| r.norm()).fold(1.0, f64::max);
    // (sum of members, count)
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for &r in found {
        match groups
            .iter_mut()
            .find(|(s, m)| (s / *m as f64 - r).norm() < CLUSTER_TOL * scale)
        {
            Some(g) => {
                g.0 += r;
                g.1 += 1;
            }
            None => groups.push((r, 1)),
        }
    }
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                let a = groups[i].0 / groups[i].1 as f64;
                let b = groups[j].0 / groups[j].1 as f64;
                let d = (a - b).norm();
                if d < MULTIPLE_ROOT_RADIUS * scale && best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((i, j, d));
                }
            }
        }
        let Some((i, j, _)) = best else { break };
        let centre = (groups[i].0 + groups[j].0) / (groups[i].1 + groups[j].1) as f64;
        let deriv = dp.eval(centre).norm() / dp.abs_eval(centre).max(f64::MIN_POSITIVE);
        let value = p.eval(centre).norm() / p.abs_eval(centre).max(f64::MIN_POSITIVE);
        if deriv > MULTIPLE_ROOT_DERIV_TOL || value > 1e-10 {
            break;
        }
        let (s, m) = groups.remove(j);
        groups[i].0 += s;
        groups[i].1 += m;
    }
    groups
        .into_iter()
        .map(|(s, m)| (s / m as f64, m))
        .collect()
}

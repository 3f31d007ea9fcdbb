use num_complex::Complex64;

use crate::funclib::CLUSTER_TOL;
use crate::halfplane::S0Function;

/// Reason two S₀ functions fail to be coprime.
#[derive(Debug, Clone, PartialEq)]
pub enum CoprimeWitness {
    SharedZero(Complex64),
    BothExponential { alpha1: f64, alpha2: f64 },
    SharedAtom(f64),
    /// Fraction of boundary samples where both outer log-densities are
    /// below `−tol`, and one such sample.
    OuterOverlap { fraction: f64, sample: f64 },
}

#[derive(Debug, Clone)]
pub struct CoprimeReport {
    pub coprime: bool,
    pub witnesses: Vec<CoprimeWitness>,
}

const OVERLAP_SAMPLES: usize = 4096;
const NEGLIGIBLE_FRACTION: f64 = 1e-3;

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= CLUSTER_TOL * (1.0 + a.norm().max(b.norm()))
}

/// Checks the four coprimality conditions on the component data of `h1`
/// and `h2`: disjoint Blaschke zeros, at most one exponential factor,
/// disjoint singular atoms, and essentially disjoint sets where the outer
/// log-densities drop below `−tol`.
pub fn coprime_check(h1: &S0Function, h2: &S0Function, tol: f64) -> CoprimeReport {
    let mut witnesses = Vec::new();

    for (a, _) in h1.blaschke_part().zeros().iter() {
        if h2.blaschke_part().zeros().iter().any(|(b, _)| close(*a, *b)) {
            witnesses.push(CoprimeWitness::SharedZero(*a));
        }
    }

    let (s1, s2) = (h1.singular_part(), h2.singular_part());
    if s1.alpha() != 0.0 && s2.alpha() != 0.0 {
        witnesses.push(CoprimeWitness::BothExponential { alpha1: s1.alpha(), alpha2: s2.alpha() });
    }
    for &(t, _) in s1.atoms() {
        if s2.atoms().iter().any(|&(u, _)| (t - u).abs() <= CLUSTER_TOL * (1.0 + t.abs())) {
            witnesses.push(CoprimeWitness::SharedAtom(t));
        }
    }

    if let (Some(o1), Some(o2)) = (h1.outer_part(), h2.outer_part()) {
        let (d1, d2) = (o1.log_density(), o2.log_density());
        let mut grid = d1.sample_grid(OVERLAP_SAMPLES);
        grid.extend(d2.sample_grid(OVERLAP_SAMPLES));
        let hits: Vec<f64> = grid.iter().copied().filter(|&t| d1.eval(t) < -tol && d2.eval(t) < -tol).collect();
        let fraction = hits.len() as f64 / grid.len() as f64;
        if fraction > NEGLIGIBLE_FRACTION {
            witnesses.push(CoprimeWitness::OuterOverlap { fraction, sample: hits[0] });
        }
    }

    CoprimeReport { coprime: witnesses.is_empty(), witnesses }
}

use num_complex::Complex64;

use crate::funclib::{poly_roots, Polynomial, RationalFunction};
use crate::factorization::HelsonPair;
use crate::halfplane::{Holomorphic, S0Function};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionKind {
    RealPole,
    /// Zero of `h₁ + h₂` on ℝ (a real pole of the reconstructed function).
    PairDenominatorZero,
    SingularAtom,
    /// Grid point where `|h₁ + h₂|` just above ℝ falls below the threshold
    /// (pairs with outer parts, whose sum is not a polynomial quotient).
    GridMinimum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obstruction {
    pub kind: ObstructionKind,
    pub location: f64,
}

#[derive(Debug, Clone)]
pub struct DomainScan {
    pub interval: (f64, f64),
    pub grid_size: usize,
    pub obstructions: Vec<Obstruction>,
}

impl DomainScan {
    pub fn is_clear(&self) -> bool {
        self.obstructions.is_empty()
    }
}

pub enum ScanTarget<'a> {
    Rational(&'a RationalFunction),
    Pair(&'a HelsonPair),
}

const REAL_TOL: f64 = 1e-8;
const GRID_HEIGHT: f64 = 1e-6;
const GRID_THRESHOLD: f64 = 1e-3;

fn real_roots_in(p: &Polynomial, (a, b): (f64, f64)) -> Vec<f64> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let Ok(roots) = poly_roots(p, 1e-6) else { return Vec::new() };
    let mut out: Vec<f64> = roots
        .iter()
        .filter(|(r, _)| r.im.abs() <= REAL_TOL * (1.0 + r.norm()) && r.re > a && r.re < b)
        .map(|(r, _)| r.re)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

fn atoms(h: &S0Function, (a, b): (f64, f64)) -> impl Iterator<Item = Obstruction> + '_ {
    h.singular_part()
        .atoms()
        .iter()
        .filter(move |(t, _)| *t > a && *t < b)
        .map(|&(t, _)| Obstruction { kind: ObstructionKind::SingularAtom, location: t })
}

/// Lists real poles, real zeros of `h₁ + h₂` and singular atoms inside the
/// open interval `(a, b)`. An empty list means nothing on the grid prevents
/// continuation across the interval.
pub fn real_domain_scan(target: ScanTarget<'_>, interval: (f64, f64), grid_size: usize) -> DomainScan {
    let mut obstructions = Vec::new();
    match target {
        ScanTarget::Rational(f) => {
            for t in real_roots_in(f.den(), interval) {
                obstructions.push(Obstruction { kind: ObstructionKind::RealPole, location: t });
            }
        }
        ScanTarget::Pair(pair) => {
            obstructions.extend(atoms(&pair.h1, interval));
            obstructions.extend(atoms(&pair.h2, interval));
            if pair.h1.outer_part().is_none() && pair.h2.outer_part().is_none() {
                // finite Blaschke products up to singular factors: sum as a polynomial quotient
                let (n1, d1) = pair.h1.blaschke_part().as_polynomials();
                let (n2, d2) = pair.h2.blaschke_part().as_polynomials();
                let sum = &(&n1.scaled(pair.h1.front()) * &d2) + &(&n2.scaled(pair.h2.front()) * &d1);
                for t in real_roots_in(&sum, interval) {
                    obstructions.push(Obstruction { kind: ObstructionKind::PairDenominatorZero, location: t });
                }
            } else {
                let (a, b) = interval;
                let n = grid_size.max(2);
                let vals: Vec<(f64, f64)> = (0..n)
                    .map(|k| a + (b - a) * (k as f64 + 0.5) / n as f64)
                    .map(|x| {
                        let z = Complex64::new(x, GRID_HEIGHT);
                        let v = pair.h1.value(z).and_then(|u| Ok(u + pair.h2.value(z)?));
                        (x, v.map(|v| v.norm()).unwrap_or(0.0))
                    })
                    .collect();
                for k in 0..n {
                    let here = vals[k].1;
                    let left = if k > 0 { vals[k - 1].1 } else { f64::INFINITY };
                    let right = if k + 1 < n { vals[k + 1].1 } else { f64::INFINITY };
                    if here < GRID_THRESHOLD && here <= left && here <= right {
                        obstructions.push(Obstruction { kind: ObstructionKind::GridMinimum, location: vals[k].0 });
                    }
                }
            }
        }
    }
    obstructions.sort_by(|x, y| x.location.total_cmp(&y.location));
    DomainScan { interval, grid_size, obstructions }
}

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfplane::{Holomorphic, HerglotzRepresentation};

/// `(1/π) Im q(x + iε)` on the grid.
pub fn stieltjes_invert_fn<H: Holomorphic + ?Sized>(q: &H, grid: &[f64], eps: f64) -> Result<Vec<f64>> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("ε must be positive, got {eps}")));
    }
    grid.iter().map(|&x| Ok(q.value(Complex64::new(x, eps))?.im / PI)).collect()
}

/// Stieltjes inversion of a representation; grid points must stay `10ε`
/// away from its atoms.
pub fn stieltjes_invert(q: &HerglotzRepresentation, grid: &[f64], eps: f64) -> Result<Vec<f64>> {
    for &x in grid {
        if let Some(&(t, _)) = q.atoms().iter().find(|(t, _)| (x - t).abs() < 10.0 * eps) {
            return Err(Error::Domain(format!("grid point {x} within 10ε of the atom at {t}")));
        }
    }
    stieltjes_invert_fn(q, grid, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfplane::{Density, QuadratureConfig};

    #[test]
    fn linear_term_has_no_density() {
        let q = HerglotzRepresentation::new(0.0, 1.0, vec![], None, QuadratureConfig::default()).unwrap();
        let v = stieltjes_invert(&q, &[-1.0, 0.0, 2.0], 1e-6).unwrap();
        assert!(v.iter().all(|d| d.abs() < 1e-6));
    }

    #[test]
    fn atom_away_from_grid() {
        let q = HerglotzRepresentation::new(0.0, 0.0, vec![(0.0, 1.0)], None, QuadratureConfig::default()).unwrap();
        let eps = 1e-3;
        let v = stieltjes_invert(&q, &[1.0], eps).unwrap()[0];
        let exact = (-1.0 / Complex64::new(1.0, eps)).im / PI;
        assert!((v - exact).abs() < 1e-15);
        assert!((v - eps / PI).abs() < 1e-9);
        assert!(stieltjes_invert(&q, &[0.005], eps).is_err());
    }

    #[test]
    fn box_density_converges() {
        let d = Density::boxed(-1.0, 1.0, 0.5).unwrap();
        let q = HerglotzRepresentation::new(0.0, 0.0, vec![], Some(d), QuadratureConfig::default()).unwrap();
        let mut last = 0.0;
        for eps in [1e-2, 1e-3, 1e-4] {
            last = stieltjes_invert(&q, &[0.0], eps).unwrap()[0];
            // (1/π)·atan(1/ε) for the half-height box
            assert!((last - (1.0 / eps).atan() / PI).abs() < 1e-8);
        }
        assert!((last - 0.5).abs() < 1e-2);
    }
}

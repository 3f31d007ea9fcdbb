//! Spectral-side numerics: argument-principle root counting in ℂ⁺,
//! negative-index estimation from Gram inertia, Stieltjes inversion and
//! scanning of real intervals for obstructions to analytic continuation.

mod contour;
mod index;
mod scan;
mod stieltjes;

pub use contour::{count_upper_roots, ContourSpec};
pub use index::{estimate_negative_index, verify_index_theorem, IndexEstimate, DEFAULT_SCHEDULE};
pub use scan::{real_domain_scan, DomainScan, Obstruction, ObstructionKind, ScanTarget};
pub use stieltjes::{stieltjes_invert, stieltjes_invert_fn};

//! Inner–outer splitting of bounded rational data and the coprime pair
//! decomposition `f = i(h₂ − h₁)/(h₂ + h₁)` of symmetric rational functions.

mod coprime;
mod helson;
mod split;

pub use coprime::{coprime_check, CoprimeReport, CoprimeWitness};
pub use helson::{decompose_quotient, helson_decompose, reconstruct_from_pair, HelsonPair};
pub use split::{inner_outer_split, InnerOuterSplit};

/// Imaginary part above which a computed root counts as lying in ℂ⁺.
pub(crate) const UPPER_TOL: f64 = 1e-10;

//! Function specifications read from JSON files.
//!
//! Complex numbers are two-element arrays `[re, im]`. A file holds one
//! specification object or an array of them.

use std::sync::Arc;

use nsym_model::funclib::{check_nsym_symmetry, Polynomial, RationalFunction};
use nsym_model::halfplane::{
    BlaschkeProduct, Density, FnHandle, HerglotzRepresentation, OuterFunction, QuadratureConfig, S0Function,
    SingularInner,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub label: String,
    #[serde(flatten)]
    pub body: FunctionBody,
}

fn unit() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FunctionBody {
    /// Coefficients in ascending powers.
    Rational { num: Vec<Coeff>, den: Vec<Coeff> },
    Blaschke {
        zeros: Vec<[f64; 2]>,
        #[serde(default = "unit")]
        front: [f64; 2],
    },
    Herglotz {
        #[serde(default)]
        a: f64,
        #[serde(default)]
        b: f64,
        /// `[location, weight]` pairs.
        #[serde(default)]
        atoms: Vec<[f64; 2]>,
        #[serde(default)]
        density: Option<DensitySpec>,
    },
    S0Product {
        #[serde(default = "unit")]
        front: [f64; 2],
        #[serde(default)]
        blaschke_zeros: Vec<[f64; 2]>,
        /// `[location, mass]` pairs.
        #[serde(default)]
        singular_atoms: Vec<[f64; 2]>,
        #[serde(default)]
        alpha: f64,
        /// Boundary log-modulus of the outer factor.
        #[serde(default)]
        outer_log_density: Option<DensitySpec>,
    },
}

/// A real coefficient, or `[re, im]` for a complex one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Real(f64),
    Complex([f64; 2]),
}

impl Coeff {
    fn value(self) -> Complex64 {
        match self {
            Coeff::Real(re) => Complex64::new(re, 0.0),
            Coeff::Complex(v) => c64(&v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum DensitySpec {
    Constant { c: f64 },
    #[serde(rename = "box")]
    Boxed { lo: f64, hi: f64, height: f64 },
    RationalModulus { num: Vec<f64>, den: Vec<f64> },
}

impl DensitySpec {
    pub fn build(&self) -> nsym_model::Result<Density> {
        match self {
            DensitySpec::Constant { c } => Ok(Density::constant(*c)),
            DensitySpec::Boxed { lo, hi, height } => Density::boxed(*lo, *hi, *height),
            DensitySpec::RationalModulus { num, den } => Density::rational_modulus(num, den),
        }
    }

    /// Points where the density is discontinuous or has a kink.
    pub fn edges(&self) -> Vec<f64> {
        match self {
            DensitySpec::Boxed { lo, hi, .. } => vec![*lo, *hi],
            _ => Vec::new(),
        }
    }
}

fn c64(v: &[f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

/// Parses a spec file body; serde diagnostics carry line and column.
pub fn parse_specs(text: &str) -> Result<Vec<FunctionSpec>, CliError> {
    let trimmed = text.trim_start();
    let parsed = if trimmed.starts_with('[') {
        serde_json::from_str::<Vec<FunctionSpec>>(text)
    } else {
        serde_json::from_str::<FunctionSpec>(text).map(|s| vec![s])
    };
    let specs = parsed.map_err(|e| CliError::Validation(format!("spec: {e}")))?;
    if specs.is_empty() {
        return Err(CliError::Validation("spec: no function given".into()));
    }
    Ok(specs)
}

impl FunctionSpec {
    fn invalid(&self, field: &str, e: impl std::fmt::Display) -> CliError {
        CliError::Validation(format!("spec {:?}: field `{field}`: {e}", self.label))
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            FunctionBody::Rational { .. } => "rational",
            FunctionBody::Blaschke { .. } => "blaschke",
            FunctionBody::Herglotz { .. } => "herglotz",
            FunctionBody::S0Product { .. } => "s0-product",
        }
    }

    /// Rational function from the coefficient lists (no symmetry check).
    pub fn rational(&self) -> Result<RationalFunction, CliError> {
        match &self.body {
            FunctionBody::Rational { num, den } => {
                let p: Vec<Complex64> = num.iter().map(|c| c.value()).collect();
                let q: Vec<Complex64> = den.iter().map(|c| c.value()).collect();
                if p.iter().chain(&q).any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                    return Err(self.invalid("num", "non-finite coefficient"));
                }
                RationalFunction::new(Polynomial::new(p), Polynomial::new(q)).map_err(|e| self.invalid("den", e))
            }
            _ => Err(self.invalid("kind", format!("expected a rational spec, got {}", self.kind()))),
        }
    }

    /// Rational function required to satisfy the N_sym symmetry.
    pub fn nsym_rational(&self) -> Result<RationalFunction, CliError> {
        let f = self.rational()?;
        if !check_nsym_symmetry(&f, 1e-10) {
            return Err(self.invalid("num", "fails N_sym symmetry"));
        }
        Ok(f)
    }

    pub fn s0(&self) -> Result<S0Function, CliError> {
        match &self.body {
            FunctionBody::Blaschke { zeros, front } => {
                let zs: Vec<Complex64> = zeros.iter().map(c64).collect();
                let b = BlaschkeProduct::from_zeros(&zs).map_err(|e| self.invalid("zeros", e))?;
                S0Function::new(c64(front), b, SingularInner::trivial(), None).map_err(|e| self.invalid("front", e))
            }
            FunctionBody::S0Product { front, blaschke_zeros, singular_atoms, alpha, outer_log_density } => {
                let zs: Vec<Complex64> = blaschke_zeros.iter().map(c64).collect();
                let b = BlaschkeProduct::from_zeros(&zs).map_err(|e| self.invalid("blaschke_zeros", e))?;
                let atoms = singular_atoms.iter().map(|a| (a[0], a[1])).collect();
                let s = SingularInner::new(atoms, *alpha).map_err(|e| self.invalid("singular_atoms", e))?;
                let outer = match outer_log_density {
                    Some(d) => {
                        let density = d.build().map_err(|e| self.invalid("outer_log_density", e))?;
                        Some(
                            OuterFunction::new(density, QuadratureConfig::default())
                                .map_err(|e| self.invalid("outer_log_density", e))?,
                        )
                    }
                    None => None,
                };
                S0Function::new(c64(front), b, s, outer).map_err(|e| self.invalid("outer_log_density", e))
            }
            _ => Err(self.invalid("kind", format!("expected a blaschke or s0-product spec, got {}", self.kind()))),
        }
    }

    pub fn herglotz(&self) -> Result<HerglotzRepresentation, CliError> {
        match &self.body {
            FunctionBody::Herglotz { a, b, atoms, density } => {
                let d = density.as_ref().map(|d| d.build()).transpose().map_err(|e| self.invalid("density", e))?;
                let atoms = atoms.iter().map(|x| (x[0], x[1])).collect();
                HerglotzRepresentation::new(*a, *b, atoms, d, QuadratureConfig::default())
                    .map_err(|e| self.invalid("atoms", e))
            }
            _ => Err(self.invalid("kind", format!("expected a herglotz spec, got {}", self.kind()))),
        }
    }

    /// Handle for kernel computations together with the kernel family:
    /// `true` for Nevanlinna data (rational, herglotz), `false` for S₀ symbols.
    pub fn handle(&self) -> Result<(FnHandle, bool), CliError> {
        Ok(match &self.body {
            FunctionBody::Rational { .. } => (Arc::new(self.nsym_rational()?), true),
            FunctionBody::Herglotz { .. } => (Arc::new(self.herglotz()?), true),
            _ => (Arc::new(self.s0()?), false),
        })
    }
}

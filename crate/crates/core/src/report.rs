//! Outcome of a numerical identity check.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The check could not decide (e.g. an index estimate did not stabilize).
    Inconclusive,
    /// The identity does not apply to this input (degenerate case).
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub name: String,
    pub points: Vec<Complex64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub status: Status,
    /// Residuals of alternative forms of the identity, reported alongside.
    pub alternatives: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

impl IdentityReport {
    /// Report whose status follows `max_residual < tolerance`.
    pub fn from_residual(name: impl Into<String>, points: Vec<Complex64>, max_residual: f64, tolerance: f64) -> Self {
        let status = if max_residual < tolerance { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            points,
            max_residual,
            tolerance,
            status,
            alternatives: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn skipped(name: impl Into<String>, tolerance: f64, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            points: Vec::new(),
            max_residual: f64::NAN,
            tolerance,
            status: Status::Skip,
            alternatives: Vec::new(),
            notes: vec![reason.into()],
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_alternative(mut self, name: impl Into<String>, residual: f64) -> Self {
        self.alternatives.push((name.into(), residual));
        self
    }
}

/// Running maximum that treats NaN as infinitely bad.
pub(crate) fn worst(acc: f64, r: f64) -> f64 {
    if r.is_nan() || acc.is_nan() {
        f64::INFINITY
    } else {
        acc.max(r)
    }
}

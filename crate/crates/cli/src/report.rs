//! Run reports and their deterministic serialization.

use std::io::{self, Write};

use nsym_model::report::{IdentityReport, Status};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub residual: f64,
    pub tolerance: f64,
    pub alternatives: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

impl Check {
    pub fn threshold(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let status = if residual < tolerance { Status::Pass } else { Status::Fail };
        Self { name: name.into(), status, residual, tolerance, alternatives: Vec::new(), notes: Vec::new() }
    }

    pub fn from_identity(prefix: &str, r: IdentityReport) -> Self {
        let name = if prefix.is_empty() { r.name } else { format!("{prefix}/{}", r.name) };
        Self {
            name,
            status: r.status,
            residual: r.max_residual,
            tolerance: r.tolerance,
            alternatives: r.alternatives,
            notes: r.notes,
        }
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    fn to_json(&self) -> Value {
        let alternatives: serde_json::Map<String, Value> =
            self.alternatives.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
        json!({
            "name": self.name,
            "status": self.status.as_str(),
            "residual": num(self.residual),
            "tolerance": num(self.tolerance),
            "alternatives": alternatives,
            "notes": self.notes,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub wall_ms: u64,
    pub results: Value,
}

impl RunReport {
    /// Skipped checks do not count against the overall verdict.
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| matches!(c.status, Status::Pass | Status::Skip))
    }

    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            3
        } else if self.checks.iter().any(|c| c.status == Status::Inconclusive) {
            4
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "inputs": self.inputs,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "pass": self.pass(),
            "seed": self.seed,
            "wall_ms": self.wall_ms,
            "results": self.results,
        })
    }

    /// Pretty JSON with sorted keys and every float written with 17
    /// significant digits.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, Float17::default());
        self.to_json().serialize(&mut ser).expect("serializing a JSON value to memory cannot fail");
        out.push(b'\n');
        out
    }
}

/// Finite floats as JSON numbers (negative zero folded to zero); NaN and
/// infinities become `null`.
pub fn num(v: f64) -> Value {
    json!(v + 0.0)
}

pub fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn complex_list(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

#[derive(Default)]
struct Float17 {
    pretty: PrettyFormatter<'static>,
}

impl Formatter for Float17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_and_nan() {
        let r = RunReport {
            command: "x".into(),
            inputs: vec!["a".into()],
            checks: vec![Check::threshold("c", f64::NAN, 1e-8)],
            seed: 0,
            wall_ms: 0,
            results: json!({"v": num(0.1), "z": num(-0.0)}),
        };
        let text = String::from_utf8(r.to_bytes()).unwrap();
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
        assert!(text.contains("\"residual\": null"));
        assert!(text.contains("\"pass\": false"));
        assert!(text.contains("\"z\": 0.0000000000000000e0"));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["results"]["v"].as_f64(), Some(0.1));
        assert_eq!(r.exit_code(), 3);
    }
}

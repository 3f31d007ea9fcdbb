//! Subcommand pipelines.

use std::path::Path;
use std::sync::Arc;

use nsym_model::factorization::{
    coprime_check, decompose_quotient, helson_decompose, inner_outer_split, reconstruct_from_pair, HelsonPair,
};
use nsym_model::funclib::{cayley_rational, poly_roots, RationalFunction};
use nsym_model::halfplane::{FnHandle, Holomorphic, S0Function};
use nsym_model::kernels::{
    compress_difference_quotient, gram_matrix, model_space_rank_test, nevanlinna_kernel, realize_reconstruct,
    schur_kernel, verify_conjugation_identity, verify_dq_identities, verify_dw_symbol_identity,
    verify_rank_one_resolvent_difference, verify_schur_diagonal, verify_sum_decomposition, KernelGram,
    ModelCompression,
};
use nsym_model::report::Status;
use nsym_model::sampling;
use nsym_model::spectral::{
    count_upper_roots, estimate_negative_index, stieltjes_invert, stieltjes_invert_fn, verify_index_theorem,
    ContourSpec, DEFAULT_SCHEDULE,
};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::complex_arg::{parse_complex, parse_complex_list};
use crate::report::{complex, complex_list, num, Check, RunReport};
use crate::spec::{FunctionBody, FunctionSpec};
use crate::{CliError, Command, RunArgs};

/// Two-column CSV side table.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: [&'static str; 2],
    pub rows: Vec<[f64; 2]>,
}

impl Table {
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path).map_err(io)?;
        w.write_record(self.header).map_err(io)?;
        for [a, b] in &self.rows {
            w.write_record([(a + 0.0).to_string(), (b + 0.0).to_string()]).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))
    }
}

pub struct Outcome {
    pub report: RunReport,
    /// Side table of the first input.
    pub table: Option<Table>,
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn run(command: &Command, specs: &[FunctionSpec]) -> Result<Outcome, CliError> {
    let args = command.args();
    let mut checks = Vec::new();
    let mut results = Map::new();
    let mut table = None;
    for spec in specs {
        let mut ctx = Ctx { args, label: &spec.label, checks: Vec::new(), table: None };
        let value = match command {
            Command::Factor(_) => ctx.factor(spec)?,
            Command::Helson(_) => ctx.helson(spec)?,
            Command::Gram(_) => ctx.gram(spec)?,
            Command::Index(_) => ctx.index(spec)?,
            Command::Roots(_) => ctx.roots(spec)?,
            Command::Stieltjes(_) => ctx.stieltjes(spec)?,
            Command::VerifyAll(_) => ctx.verify_all(spec)?,
        };
        checks.extend(ctx.checks);
        if table.is_none() {
            table = ctx.table;
        }
        results.insert(spec.label.clone(), value);
    }
    let report = RunReport {
        command: command.name().to_string(),
        inputs: specs.iter().map(|s| s.label.clone()).collect(),
        checks,
        seed: args.seed,
        wall_ms: 0,
        results: Value::Object(results),
    };
    Ok(Outcome { report, table })
}

struct Ctx<'a> {
    args: &'a RunArgs,
    label: &'a str,
    checks: Vec<Check>,
    table: Option<Table>,
}

fn s0_json(h: &S0Function) -> Value {
    json!({
        "front": complex(h.front()),
        "zeros": complex_list(&h.blaschke_part().zeros().expanded()),
        "singular_atoms": h.singular_part().atoms().iter().map(|&(t, m)| json!([num(t), num(m)])).collect::<Vec<_>>(),
        "alpha": num(h.singular_part().alpha()),
        "outer": h.outer_part().map(|o| Value::String(o.log_density().name().to_string())).unwrap_or(Value::Null),
    })
}

fn gram_json(g: &KernelGram) -> Value {
    json!({
        "points": complex_list(&g.points),
        "inertia": [g.inertia.0, g.inertia.1, g.inertia.2],
        "eigenvalues": g.eigenvalues.iter().map(|&e| num(e)).collect::<Vec<_>>(),
        "hermiticity_defect": num(g.hermiticity_defect),
    })
}

fn scaled(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

/// Pairs of probe points from both half-planes accepted by `ok`.
fn probe_pairs(n: usize, seed: u64, ok: impl Fn(Complex64) -> bool) -> Vec<(Complex64, Complex64)> {
    let pts: Vec<Complex64> = sampling::probes_both(16 * n + 16, seed).into_iter().filter(|&z| ok(z)).take(2 * n).collect();
    pts.chunks_exact(2).map(|p| (p[0], p[1])).collect()
}

fn probe_points(n: usize, seed: u64, ok: impl Fn(Complex64) -> bool) -> Vec<Complex64> {
    sampling::probes_both(8 * n + 16, seed).into_iter().filter(|&z| ok(z)).take(n).collect()
}

impl Ctx<'_> {
    fn name(&self, check: &str) -> String {
        format!("{}/{check}", self.label)
    }

    fn push(&mut self, mut check: Check) {
        check.name = self.name(&check.name);
        self.checks.push(check);
    }

    fn push_identity(&mut self, r: nsym_model::report::IdentityReport) {
        self.checks.push(Check::from_identity(self.label, r));
    }

    fn sample_points(&self, default_n: usize) -> Result<Vec<Complex64>, CliError> {
        match &self.args.at {
            Some(text) => parse_complex_list(text).map_err(|e| CliError::Validation(format!("--at: {e}"))),
            None => Ok(sampling::stratified_upper(self.args.points.unwrap_or(default_n), self.args.seed)),
        }
    }

    fn w_or(&self, default: Complex64) -> Result<Complex64, CliError> {
        match &self.args.w {
            Some(text) => parse_complex(text).map_err(|e| CliError::Validation(format!("--w: {e}"))),
            None => Ok(default),
        }
    }

    fn factor(&mut self, spec: &FunctionSpec) -> Result<Value, CliError> {
        match &spec.body {
            FunctionBody::Rational { .. } => {
                let f = spec.nsym_rational()?;
                let g = cayley_rational(&f)?;
                let (h1, h2) = decompose_quotient(&g)?;
                let mut worst: f64 = 0.0;
                for z in sampling::uniform_box(20, self.args.seed, (-5.0, 5.0), (0.1, 5.0)) {
                    let (Ok(a), Ok(b), Ok(gz)) = (h1.value(z), h2.value(z), g.value(z)) else { continue };
                    worst = worst.max(scaled(a / b, gz));
                }
                self.push(Check::threshold("cayley-quotient", worst, self.args.tol));
                let zeros = if f.num().degree().unwrap_or(0) > 0 { f.zeros()?.expanded() } else { Vec::new() };
                Ok(json!({
                    "kind": "rational",
                    "degree": f.degree(),
                    "zeros": complex_list(&zeros),
                    "poles": complex_list(&f.poles().expanded()),
                    "cayley": {"numerator": g.num().to_string(), "denominator": g.den().to_string()},
                    "h1": s0_json(&h1),
                    "h2": s0_json(&h2),
                }))
            }
            FunctionBody::Blaschke { .. } | FunctionBody::S0Product { .. } => {
                let h = spec.s0()?;
                if h.is_finite_blaschke() {
                    let (n, d) = h.blaschke_part().as_polynomials();
                    let g = RationalFunction::new(n.scaled(h.front()), d)?;
                    let split = inner_outer_split(&g)?;
                    let outer_defect = (split.outer_rational.value(I)? - 1.0).norm();
                    let degree_gap = split.inner.degree().abs_diff(h.blaschke_part().degree()) as f64;
                    self.push(
                        Check::threshold("inner-outer-split", outer_defect + degree_gap, self.args.tol)
                            .note("a finite Blaschke product is its own inner factor"),
                    );
                }
                Ok(s0_json(&h))
            }
            FunctionBody::Herglotz { .. } => Err(CliError::Validation(format!(
                "spec {:?}: field `kind`: factor needs a rational, blaschke or s0-product spec",
                spec.label
            ))),
        }
    }

    fn helson_checks(&mut self, f: &RationalFunction, pair: &HelsonPair) -> Result<(), CliError> {
        self.push(Check::threshold("helson-reconstruction", pair.certificate, 1e-6));
        let cop = coprime_check(&pair.h1, &pair.h2, 1e-8);
        let mut check = Check::threshold("coprime", if cop.coprime { 0.0 } else { 1.0 }, 0.5);
        check.notes = cop.witnesses.iter().map(|w| format!("{w:?}")).collect();
        self.push(check);
        let g = cayley_rational(f)?;
        let mut worst: f64 = 0.0;
        for z in probe_points(30, self.args.seed ^ 0xca11, |z| g.value(z).is_ok() && pair.quotient(z).is_ok()) {
            worst = worst.max(scaled(pair.quotient(z)?, g.value(z)?));
        }
        self.push(Check::threshold("cayley-consistency", worst, 1e-6));
        Ok(())
    }

    fn helson(&mut self, spec: &FunctionSpec) -> Result<Value, CliError> {
        let f = spec.nsym_rational()?;
        let pair = helson_decompose(&f)?;
        self.helson_checks(&f, &pair)?;
        Ok(json!({"h1": s0_json(&pair.h1), "h2": s0_json(&pair.h2), "certificate": num(pair.certificate)}))
    }

    fn kernel_gram(&self, handle: &FnHandle, nevanlinna: bool, points: &[Complex64]) -> Result<KernelGram, CliError> {
        let h = handle.clone();
        Ok(if nevanlinna {
            gram_matrix(move |z, w| nevanlinna_kernel(&*h, z, w), points)?
        } else {
            gram_matrix(move |z, w| schur_kernel(&*h, z, w), points)?
        })
    }

    fn gram(&mut self, spec: &FunctionSpec) -> Result<Value, CliError> {
        let (handle, nevanlinna) = spec.handle()?;
        let points = self.sample_points(6)?;
        let g = self.kernel_gram(&handle, nevanlinna, &points)?;
        self.push(Check::threshold("hermiticity", g.hermiticity_defect, 1e-10));
        if !matches!(spec.body, FunctionBody::Rational { .. }) {
            let lowest = g.eigenvalues.first().copied().unwrap_or(0.0);
            self.push(Check::threshold("positivity", (-lowest).max(0.0), 1e-10));
        }
        self.table = Some(Table {
            header: ["re", "im"],
            rows: g.matrix.transpose().iter().map(|v| [v.re, v.im]).collect(),
        });
        let mut value = gram_json(&g);
        value["kernel"] = json!(if nevanlinna { "nevanlinna" } else { "schur" });
        Ok(value)
    }

    fn schedule(&self) -> Vec<usize> {
        match self.args.points {
            Some(n) => {
                let mut s: Vec<usize> = DEFAULT_SCHEDULE.iter().copied().filter(|&k| k < n).collect();
                s.push(n.max(1));
                s
            }
            None => DEFAULT_SCHEDULE.to_vec(),
        }
    }

    fn witnesses(&self) -> Result<Vec<Complex64>, CliError> {
        Ok(match &self.args.w {
            Some(_) => vec![self.w_or(-I)?],
            None => vec![c(0.0, -1.0), c(-2.0, -1.0), c(5.0, -3.0)],
        })
    }

    fn index(&mut self, spec: &FunctionSpec) -> Result<Value, CliError> {
        let (handle, nevanlinna) = spec.handle()?;
        if !nevanlinna {
            return Err(CliError::Validation(format!(
                "spec {:?}: field `kind`: index needs a rational or herglotz spec",
                spec.label
            )));
        }
        let schedule = self.schedule();
        let est = estimate_negative_index(&*handle, &schedule, self.args.seed)?;
        let mut check = Check::threshold("index-stabilized", 0.0, 0.5);
        if !est.stabilized {
            check.status = Status::Inconclusive;
            check.residual = f64::NAN;
        }
        self.push(check);
        if let FunctionBody::Rational { .. } = spec.body {
            let f = spec.nsym_rational()?;
            let r = verify_index_theorem(&f, &self.witnesses()?, &schedule, &ContourSpec::default(), self.args.seed)?;
            self.push_identity(r);
        }
        Ok(json!({
            "kappa": est.kappa,
            "point_counts": est.point_counts.iter().map(|&(n, k)| json!([n, k])).collect::<Vec<_>>(),
            "stabilized": est.stabilized,
        }))
    }

    fn roots(&mut self, spec: &FunctionSpec) -> Result<Value, CliError> {
        let f = spec.rational()?;
        let w = self.w_or(-I)?;
        if !(w.im < 0.0) {
            return Err(CliError::Validation(format!("--w: {w} must lie in the lower half-plane")));
        }
        let count = count_upper_roots(&f, w, &ContourSpec::default())?;
        let p = f.num() - &f.den().scaled(w);
        let oracle = if p.degree().unwrap_or(0) > 0 {
            poly_roots(&p, 1e-6)?.iter().filter(|(r, _)| r.im > 0.0).map(|(_, m)| m).sum::<usize>()
        } else {
            0
        };
        self.push(
            Check::threshold("root-count-oracle", (count as f64 - oracle as f64).abs(), 0.5)
                .note(format!("winding number {count}, companion-matrix roots {oracle}")),
        );
        Ok(json!({"w": complex(w), "count": count}))
    }

    fn stieltjes(&mut self, spec: &FunctionSpec) -> Result<Value, CliError> {
        let eps = self.args.eps.unwrap_or(1e-4);
        let n = self.args.points.unwrap_or(41).max(2);
        let (lo, hi, atoms, density) = match &spec.body {
            FunctionBody::Herglotz { atoms, density, .. } => {
                let (mut lo, mut hi) = (-2.0f64, 2.0f64);
                if let Some(d) = density {
                    for e in d.edges() {
                        lo = lo.min(e - 0.5);
                        hi = hi.max(e + 0.5);
                    }
                }
                (lo, hi, atoms.iter().map(|a| a[0]).collect::<Vec<_>>(), density.clone())
            }
            FunctionBody::Rational { .. } => (-2.0, 2.0, Vec::new(), None),
            _ => {
                return Err(CliError::Validation(format!(
                    "spec {:?}: field `kind`: stieltjes needs a herglotz or rational spec",
                    spec.label
                )))
            }
        };
        let grid: Vec<f64> = (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .filter(|x| atoms.iter().all(|t| (x - t).abs() >= 10.0 * eps))
            .collect();
        let values = match &spec.body {
            FunctionBody::Herglotz { .. } => stieltjes_invert(&spec.herglotz()?, &grid, eps)?,
            _ => stieltjes_invert_fn(&spec.nsym_rational()?, &grid, eps)?,
        };
        if let Some(d) = &density {
            let rho = d.build()?;
            let edges = d.edges();
            let mut worst: f64 = 0.0;
            let mut peak: f64 = 0.0;
            for (x, v) in grid.iter().zip(&values) {
                peak = peak.max(rho.eval(*x));
                if edges.iter().all(|e| (x - e).abs() > 0.02) {
                    worst = worst.max((v - rho.eval(*x)).abs());
                }
            }
            self.push(
                Check::threshold("density-recovery", worst, 5e-3 * (1.0 + peak))
                    .note("grid points within 0.02 of a density jump are excluded"),
            );
        }
        self.table = Some(Table { header: ["x", "value"], rows: grid.iter().zip(&values).map(|(&x, &v)| [x, v]).collect() });
        Ok(json!({
            "eps": num(eps),
            "grid": grid.iter().map(|&x| num(x)).collect::<Vec<_>>(),
            "density": values.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        }))
    }

    fn verify_all(&mut self, spec: &FunctionSpec) -> Result<Value, CliError> {
        match &spec.body {
            FunctionBody::Rational { .. } => self.verify_rational(spec),
            FunctionBody::Herglotz { .. } => {
                let q = spec.herglotz()?;
                let points = self.sample_points(6)?;
                let handle: FnHandle = Arc::new(q);
                let g = self.kernel_gram(&handle, true, &points)?;
                self.push(Check::threshold("hermiticity", g.hermiticity_defect, 1e-10));
                let lowest = g.eigenvalues.first().copied().unwrap_or(0.0);
                self.push(Check::threshold("positivity", (-lowest).max(0.0), 1e-10));
                let est = estimate_negative_index(&*handle, &DEFAULT_SCHEDULE[..3], self.args.seed)?;
                self.push(Check::threshold("negative-index-zero", est.kappa as f64, 0.5));
                let density = self.stieltjes(spec)?;
                Ok(json!({"gram": gram_json(&g), "stieltjes": density}))
            }
            FunctionBody::Blaschke { .. } | FunctionBody::S0Product { .. } => {
                let h = spec.s0()?;
                self.verify_symbol("h", &h)?;
                let points = self.sample_points(6)?;
                let handle: FnHandle = Arc::new(h.clone());
                let g = self.kernel_gram(&handle, false, &points)?;
                let lowest = g.eigenvalues.first().copied().unwrap_or(0.0);
                self.push(Check::threshold("schur-positivity", (-lowest).max(0.0), 1e-10));
                Ok(json!({"symbol": s0_json(&h), "gram": gram_json(&g)}))
            }
        }
    }

    /// Conjugation, D_w-symbol and diagonal checks for one S₀ symbol.
    fn verify_symbol(&mut self, tag: &str, h: &S0Function) -> Result<(), CliError> {
        let tol = self.args.tol;
        let seed = self.args.seed;
        let pairs = probe_pairs(20, seed ^ 0x5c, |z| h.value(z).map(|v| (1.0 + v).norm() > 1e-6).unwrap_or(false));
        let r = verify_conjugation_identity(h, &pairs, tol);
        self.push_tagged(tag, r);
        let w = [c(0.0, 2.0), c(1.0, 2.0), c(0.0, 3.0), c(-1.5, 0.7)]
            .into_iter()
            .find(|&w| h.value(w).map(|v| v.norm() > 1e-3).unwrap_or(false))
            .ok_or_else(|| CliError::Numeric("no point with h(w) ≠ 0 for the D_w check".into()))?;
        let probes = probe_points(20, seed ^ 0xd3, |z| h.value(z).is_ok());
        let r = verify_dw_symbol_identity(h, w, &probes, tol)?;
        self.push_tagged(tag, r);
        let diag = probe_points(10, seed ^ 0xd1a, |z| h.value(z).map(|v| v.norm() > 1e-6).unwrap_or(false));
        let r = verify_schur_diagonal(h, &diag, tol);
        self.push_tagged(tag, r);
        Ok(())
    }

    fn push_tagged(&mut self, tag: &str, mut r: nsym_model::report::IdentityReport) {
        r.name = format!("{tag}/{}", r.name);
        self.push_identity(r);
    }

    fn verify_rational(&mut self, spec: &FunctionSpec) -> Result<Value, CliError> {
        let tol = self.args.tol;
        let seed = self.args.seed;
        let f = spec.nsym_rational()?;
        let pair = helson_decompose(&f)?;
        self.helson_checks(&f, &pair)?;

        let admissible = |z: Complex64| f.value(z).is_ok() && reconstruct_from_pair(&pair, z).is_ok();
        let pairs = probe_pairs(20, seed, admissible);
        self.push_identity(verify_sum_decomposition(&pair, &f, &pairs, tol));
        self.verify_symbol("h1", &pair.h1)?;
        self.verify_symbol("h2", &pair.h2)?;

        let z_poly = RationalFunction::from_real(&[0.0, 1.0], &[1.0])?;
        let nodes: Vec<Complex64> = [c(0.0, 1.0), c(0.0, 2.0), c(0.5, 1.5), c(-1.0, 0.8), c(0.3, -1.2)]
            .into_iter()
            .filter(|&z| f.value(z).is_ok())
            .collect();
        if nodes.len() >= 2 {
            let probes = probe_points(20, seed ^ 0xd9, |z| f.value(z).is_ok());
            self.push_identity(verify_dq_identities(&f, &z_poly, nodes[0], nodes[1], &probes, tol));
        }

        let model = self.model_relation(&f)?;

        if pair.h1.is_finite_blaschke() && pair.h2.is_finite_blaschke() {
            let n = pair.h1.blaschke_part().degree() + pair.h2.blaschke_part().degree();
            let points = sampling::separated_box(n + 2, seed, (-2.0, 2.0), (0.3, 2.5), 0.2);
            let r = model_space_rank_test(&pair.h1, &pair.h2, &points)?;
            self.push(
                Check::threshold("model-space-rank", if r.pass { 0.0 } else { 1.0 }, 0.5)
                    .note(format!("rank {} of expected {} (coprime: {})", r.rank, r.expected, r.coprime)),
            );
        }

        let w = c(0.0, 2.0);
        let probes = vec![c(0.0, 5.0), c(1.0, -0.7), c(-0.4, 1.3), c(2.0, 0.5), c(-1.5, -2.0)];
        match verify_rank_one_resolvent_difference(&pair, w, &[c(0.0, 1.0), c(0.7, 1.6)], &probes, tol) {
            Ok(r) => self.push_identity(r),
            Err(e) => self.push(Check::threshold("rank-one-resolvent", f64::NAN, tol).note(e.to_string())),
        }

        let r = verify_index_theorem(&f, &self.witnesses()?, &DEFAULT_SCHEDULE, &ContourSpec::default(), seed)?;
        self.push_identity(r);

        let points = self.sample_points(6)?;
        let handle: FnHandle = Arc::new(f.clone());
        let g = self.kernel_gram(&handle, true, &points)?;
        self.push(Check::threshold("hermiticity", g.hermiticity_defect, 1e-10));

        Ok(json!({
            "h1": s0_json(&pair.h1),
            "h2": s0_json(&pair.h2),
            "certificate": num(pair.certificate),
            "gram": gram_json(&g),
            "model": model,
        }))
    }

    /// Matrix resolvent identity and reconstruction from the compression on
    /// a basis whose size equals the McMillan degree (capped at 6).
    fn model_relation(&mut self, f: &RationalFunction) -> Result<Value, CliError> {
        let tol = self.args.tol;
        let d = f.degree().clamp(1, 6);
        let handle: FnHandle = Arc::new(f.clone());
        let mc = [1.0, 1.3, 0.7]
            .into_iter()
            .filter_map(|h0| ModelCompression::new(handle.clone(), ModelCompression::default_basis(d, h0)).ok())
            .find(|mc| mc.gram().inertia.2 == 0);
        let Some(mc) = mc else {
            self.push(Check::threshold("model-basis", f64::NAN, tol).note("no basis with a nonsingular Gram"));
            return Ok(Value::Null);
        };
        let basis = mc.basis_points().to_vec();
        let mut value = json!({"basis": complex_list(&basis), "gram_inertia": [mc.gram().inertia.0, mc.gram().inertia.1, mc.gram().inertia.2]});

        if basis.len() >= 2 {
            let (l, m) = (basis[0], basis[1]);
            let dl = compress_difference_quotient(&mc, l)?;
            let dm = compress_difference_quotient(&mc, m)?;
            let prod = &dl * &dm;
            let diff = &dl - &dm;
            let correct = (&diff - &prod * (l - m)).iter().fold(0.0f64, |a, v| a.max(v.norm()));
            let flipped = (&diff - &prod * (m - l)).iter().fold(0.0f64, |a, v| a.max(v.norm()));
            let mut check = Check::threshold("resolvent-matrix", correct, tol);
            check.alternatives.push(("D_λ − D_μ = (μ − λ) D_λ D_μ".into(), flipped));
            self.push(check.note("D_λ − D_μ = (λ − μ) D_λ D_μ"));
        } else {
            let mut check = Check::threshold("resolvent-matrix", 0.0, tol);
            check.status = Status::Skip;
            self.push(check.note("one-dimensional model space"));
        }

        let z0 = basis[0];
        let mut worst: f64 = 0.0;
        let targets = probe_points(20, self.args.seed ^ 0x7e, |z| f.value(z).is_ok());
        for &z in &targets {
            worst = worst.max(scaled(realize_reconstruct(&mc, z0, z)?, f.value(z)?));
        }
        self.push(Check::threshold("realize-reconstruct", worst, tol));
        value["reconstruction_points"] = json!(targets.len());
        Ok(value)
    }
}

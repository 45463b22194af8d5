//! Per-query commands. Each returns a [`Report`] holding a JSON body and the
//! equivalent CSV rows.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use ergotime::approx::{certify, find_periodic_basis};
use ergotime::circle::{ergodization_steps, floor_scalar, theorem2_check, RotationNumber};
use ergotime::ergodization::{ergodization_time_bracket, theorem1_bound, BracketOptions};
use ergotime::rational::{self, Rational};
use ergotime::resonance::{analyze, psi, ResonanceData};
use ergotime::scalars::{ConstantSet, DyadicInterval, RealScalar};
use ergotime::Error;
use serde_json::{json, Value};

use crate::spec::{builtin, builtin_or_err, VectorSpec};
use crate::CliError;

/// Version tag written in the first column of every CSV row.
pub const CSV_SCHEMA: &str = "ergotime/1";

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub input: Value,
    pub result: Value,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    /// False when a theorem-backed check failed.
    pub pass: bool,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "input": self.input,
            "result": self.result,
            "pass": self.pass,
            "wall_time_ms": self.wall_time_ms,
        })
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Input(format!("csv: {e}"));
        let mut header = vec!["schema"];
        header.extend(&self.csv_header);
        w.write_record(&header).map_err(io)?;
        for row in &self.csv_rows {
            let mut r = vec![CSV_SCHEMA.to_string()];
            r.extend(row.iter().cloned());
            w.write_record(&r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// `[lo, hi]` with the decimal digits used in reports.
pub fn enclosure_str(d: &DyadicInterval) -> String {
    let (lo, hi) = d.decimal_bounds(ergotime::report::DECIMAL_DIGITS);
    format!("[{lo}, {hi}]")
}

/// Where a direction vector comes from.
#[derive(Debug, Clone)]
pub enum VectorSource {
    Spec(std::path::PathBuf),
    Named(String),
}

impl VectorSource {
    pub fn load(&self) -> Result<VectorSpec, CliError> {
        match self {
            VectorSource::Spec(p) => VectorSpec::load(p),
            VectorSource::Named(n) => builtin_or_err(n),
        }
    }
}

pub fn resonance_of(spec: &VectorSpec) -> Result<ResonanceData, CliError> {
    Ok(analyze(spec.build()?)?)
}

fn timed<F: FnOnce() -> Result<Report, CliError>>(f: F) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut r = f()?;
    r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

pub fn cmd_analyze(src: &VectorSource) -> Result<Report, CliError> {
    timed(|| {
        let spec = src.load()?;
        let r = resonance_of(&spec)?;
        let basis = r
            .lattice
            .basis_i64()
            .map(|b| format!("{b:?}"))
            .unwrap_or_else(|_| "overflow".into());
        Ok(Report {
            command: "analyze",
            input: json!({ "vector": spec.name }),
            csv_header: vec!["vector", "n", "d", "q_alpha", "c_alpha", "scale", "lattice_basis"],
            csv_rows: vec![vec![
                spec.name.clone(),
                r.n.to_string(),
                r.d.to_string(),
                r.q_alpha.to_string(),
                r.c_alpha.to_string(),
                rational::format(&r.scale),
                basis,
            ]],
            result: value(&r),
            pass: true,
            wall_time_ms: 0.0,
        })
    })
}

pub fn cmd_psi(src: &VectorSource, q: &Rational) -> Result<Report, CliError> {
    timed(|| {
        let spec = src.load()?;
        let r = resonance_of(&spec)?;
        let p = psi(&r, q)?;
        Ok(Report {
            command: "psi",
            input: json!({ "vector": spec.name, "Q": rational::format(q) }),
            csv_header: vec!["vector", "Q", "witness", "value", "min_abs_dot"],
            csv_rows: vec![vec![
                spec.name.clone(),
                rational::format(q),
                format!("{:?}", p.witness),
                enclosure_str(&p.value),
                p.min_abs_dot.to_string(),
            ]],
            result: value(&p),
            pass: true,
            wall_time_ms: 0.0,
        })
    })
}

pub fn cmd_ergodize(
    src: &VectorSource,
    delta: &Rational,
    tol: Option<Rational>,
    epsilon: Option<Rational>,
) -> Result<Report, CliError> {
    timed(|| {
        let spec = src.load()?;
        let r = resonance_of(&spec)?;
        let opts = BracketOptions {
            tol,
            epsilon,
            ..Default::default()
        };
        let b = ergodization_time_bracket(&r, delta, &opts)?;
        let bound = match theorem1_bound(&r, delta) {
            Ok(b) => Some(b),
            Err(Error::Hypothesis(_)) => None,
            Err(e) => return Err(e.into()),
        };
        let within = match &bound {
            Some(bd) => Some(bd.admits(&b.t_hi)?),
            None => None,
        };
        let mut result = value(&b);
        result["bound"] = bound.as_ref().map_or(Value::Null, value);
        result["within_bound"] = within.map_or(Value::Null, Value::Bool);
        Ok(Report {
            command: "ergodize",
            input: json!({
                "vector": spec.name,
                "delta": rational::format(delta),
                "tol": opts.tol.as_ref().map(rational::format),
                "epsilon": opts.epsilon.as_ref().map(rational::format),
            }),
            csv_header: vec![
                "vector", "delta", "t_lo", "t_hi", "tol", "epsilon", "converged", "bound", "within_bound",
            ],
            csv_rows: vec![vec![
                spec.name.clone(),
                rational::format(delta),
                rational::format(&b.t_lo),
                rational::format(&b.t_hi),
                rational::format(&b.tol),
                rational::format(&b.epsilon),
                b.converged.to_string(),
                bound.as_ref().map_or(String::new(), |bd| enclosure_str(&bd.bound)),
                within.map_or(String::new(), |w| w.to_string()),
            ]],
            result,
            pass: within.unwrap_or(true),
            wall_time_ms: 0.0,
        })
    })
}

pub fn cmd_approx(src: &VectorSource, q: &Rational) -> Result<Report, CliError> {
    timed(|| {
        let spec = src.load()?;
        let r = resonance_of(&spec)?;
        let a = find_periodic_basis(&r, q)?;
        let cert = certify(&r, &a)?;
        let pairs: Vec<String> = a.pairs.iter().map(|p| format!("({}, {:?})", p.q, p.p)).collect();
        Ok(Report {
            command: "approx",
            input: json!({ "vector": spec.name, "Q": rational::format(q) }),
            csv_header: vec!["vector", "Q", "pairs", "q_bound", "pass"],
            csv_rows: vec![vec![
                spec.name.clone(),
                rational::format(q),
                pairs.join(" "),
                a.q_bound.to_string(),
                cert.pass.to_string(),
            ]],
            result: json!({ "approximation": value(&a), "certificate": value(&cert) }),
            pass: cert.pass,
            wall_time_ms: 0.0,
        })
    })
}

/// Rotation angle from a two-entry vector `(a, b)` with `a` rational: the
/// fractional part of `b / a`.
pub fn rotation_from_spec(spec: &VectorSpec) -> Result<RotationNumber, CliError> {
    let v = spec.build()?;
    if v.len() != 2 {
        return Err(CliError::Input(format!(
            "a circle rotation needs a vector of length 2, got {}",
            v.len()
        )));
    }
    let a = v[0]
        .as_rational()
        .filter(|a| *a != Rational::from_integer(0.into()))
        .ok_or_else(|| CliError::Input("first entry must be a nonzero rational".into()))?;
    let b = v[1].scale(&a.recip());
    let f = floor_scalar(&b)?;
    Ok(RotationNumber::new(b.add_rational(&Rational::from_integer(-f)))?)
}

/// `--alpha`: a built-in vector name or a rational number.
pub fn rotation_from_arg(arg: &str) -> Result<RotationNumber, CliError> {
    if let Some(spec) = builtin(arg) {
        return rotation_from_spec(&spec);
    }
    let r = rational::parse(arg).map_err(|_| {
        CliError::Input(format!("--alpha {arg:?} is neither a built-in vector nor a rational number"))
    })?;
    Ok(RotationNumber::new(RealScalar::rational(&Arc::new(ConstantSet::rational()), r))?)
}

pub fn cmd_circle(rot: &RotationNumber, label: &str, delta: &Rational) -> Result<Report, CliError> {
    timed(|| {
        let input = json!({ "alpha": label, "delta": rational::format(delta) });
        let header = vec!["alpha", "delta", "N", "psi_floor_minus_1", "pass"];
        if rot.is_rational {
            let n = ergodization_steps(rot, delta)?;
            return Ok(Report {
                command: "circle",
                input,
                result: json!({
                    "rotation": value(rot),
                    "N": n,
                    "bound": Value::Null,
                    "pass": true,
                    "status": "skipped: hypothesis (rational rotation)",
                }),
                csv_header: header,
                csv_rows: vec![vec![
                    label.to_string(),
                    rational::format(delta),
                    n.map_or("undefined".into(), |n| n.to_string()),
                    String::new(),
                    "true".into(),
                ]],
                pass: true,
                wall_time_ms: 0.0,
            });
        }
        let rep = theorem2_check(rot, delta)?;
        let mut result = value(&rep);
        result["bound"] = Value::String(rep.bound.to_string());
        Ok(Report {
            command: "circle",
            input,
            csv_header: header,
            csv_rows: vec![vec![
                label.to_string(),
                rational::format(delta),
                rep.steps.to_string(),
                rep.bound.to_string(),
                rep.pass.to_string(),
            ]],
            result,
            pass: rep.pass,
            wall_time_ms: 0.0,
        })
    })
}

/// Resolves `--spec`/`--vector` into a source; exactly one must be given.
pub fn vector_source(spec: Option<&Path>, vector: Option<&str>) -> Result<VectorSource, CliError> {
    match (spec, vector) {
        (Some(p), None) => Ok(VectorSource::Spec(p.to_path_buf())),
        (None, Some(n)) => Ok(VectorSource::Named(n.to_string())),
        (None, None) => Err(CliError::Input("give --spec FILE or --vector NAME".into())),
        (Some(_), Some(_)) => Err(CliError::Input("--spec and --vector are exclusive".into())),
    }
}

//! Verification sweeps: theorem-backed checks over grids of parameters.

use ergotime::approx::{certify, find_periodic_basis};
use ergotime::circle::theorem2_check;
use ergotime::ergodization::{ergodization_time_bracket, theorem1_bound, BracketOptions, HorizonStrategy};
use ergotime::lattice::transference_check;
use ergotime::rational::{self, Rational};
use ergotime::resonance::{theorem1_delta_max, ResonanceData};
use serde::Serialize;

use crate::commands::{enclosure_str, resonance_of, rotation_from_spec};
use crate::spec::{Check, Sweep, VectorSpec};
use crate::CliError;

pub const CSV_HEADER: &[&str] = &["vector", "check", "parameter", "value", "bound", "pass", "status"];

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub vector: String,
    pub check: Check,
    pub parameter: String,
    pub value: String,
    pub bound: String,
    /// `None` when the check was skipped.
    pub pass: Option<bool>,
    pub status: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "verify: {} rows, {} passed, {} failed, {} skipped",
            self.rows, self.passed, self.failed, self.skipped
        )
    }
}

pub fn summarize(rows: &[Row]) -> Summary {
    let mut s = Summary {
        rows: rows.len(),
        ..Default::default()
    };
    for r in rows {
        match r.pass {
            Some(true) => s.passed += 1,
            Some(false) => s.failed += 1,
            None => s.skipped += 1,
        }
    }
    s
}

struct RowBuilder<'a> {
    vector: &'a str,
    check: Check,
    parameter: String,
}

impl RowBuilder<'_> {
    fn done(&self, value: String, bound: String, pass: bool) -> Row {
        Row {
            vector: self.vector.into(),
            check: self.check,
            parameter: self.parameter.clone(),
            value,
            bound,
            pass: Some(pass),
            status: if pass { "pass".into() } else { "fail".into() },
        }
    }

    fn skipped(&self, why: &str) -> Row {
        Row {
            vector: self.vector.into(),
            check: self.check,
            parameter: self.parameter.clone(),
            value: String::new(),
            bound: String::new(),
            pass: None,
            status: format!("skipped: hypothesis ({why})"),
        }
    }

    /// Hypothesis errors skip the row; anything else fails it.
    fn from_error(&self, e: CliError) -> Row {
        match e {
            CliError::Hypothesis(m) => self.skipped(&m),
            e => Row {
                vector: self.vector.into(),
                check: self.check,
                parameter: self.parameter.clone(),
                value: String::new(),
                bound: String::new(),
                pass: Some(false),
                status: format!("error: {e}"),
            },
        }
    }
}

fn theorem1_row(rb: &RowBuilder, r: &ResonanceData, delta: &Rational, sweep: &Sweep) -> Result<Row, CliError> {
    if !r.normalized {
        return Ok(rb.skipped("no rational component"));
    }
    if *delta > theorem1_delta_max(r) {
        return Ok(rb.skipped(&format!(
            "delta > {}",
            rational::format(&theorem1_delta_max(r))
        )));
    }
    let bound = theorem1_bound(r, delta)?;
    // the empirical bracket is found without using the bound as a horizon
    let b = ergodization_time_bracket(
        r,
        delta,
        &BracketOptions {
            tol: sweep.tol.clone(),
            epsilon: sweep.epsilon.clone(),
            horizon: HorizonStrategy::Doubling,
            ..Default::default()
        },
    )?;
    let ok = bound.admits(&b.t_hi)?;
    Ok(rb.done(rational::format(&b.t_hi), enclosure_str(&bound.bound), ok))
}

fn proposition_row(rb: &RowBuilder, r: &ResonanceData, q: &Rational) -> Result<Row, CliError> {
    let a = find_periodic_basis(r, q)?;
    let cert = certify(r, &a)?;
    let qs: Vec<String> = a.pairs.iter().map(|p| p.q.to_string()).collect();
    Ok(rb.done(qs.join(" "), a.q_bound.to_string(), cert.pass))
}

fn transference_row(rb: &RowBuilder, r: &ResonanceData) -> Result<Row, CliError> {
    let t = transference_check(&r.lattice)?;
    let products: Vec<String> = t.products.iter().map(rational::format).collect();
    let mut ok = t.pass;
    if t.rank == 1 {
        ok &= t.products[0] == rational::int(1);
    }
    Ok(rb.done(products.join(" "), format!("[1, {}]", t.upper), ok))
}

fn theorem2_row(rb: &RowBuilder, spec: &VectorSpec, delta: &Rational) -> Result<Row, CliError> {
    if spec.entries.len() != 2 {
        return Ok(rb.skipped("n != 2"));
    }
    if *delta >= rational::int(1) {
        return Ok(rb.skipped("delta >= 1"));
    }
    let rot = rotation_from_spec(spec)?;
    if rot.is_rational {
        return Ok(rb.skipped("rational rotation"));
    }
    let rep = theorem2_check(&rot, delta)?;
    Ok(rb.done(rep.steps.to_string(), rep.bound.to_string(), rep.pass))
}

fn rows_for(spec: &VectorSpec, sweep: &Sweep) -> Vec<Row> {
    let mut rows = Vec::new();
    let r = resonance_of(spec);
    for &check in &sweep.checks {
        let params: Vec<Option<&Rational>> = match check {
            Check::Theorem1 | Check::Theorem2 => sweep.delta.iter().map(Some).collect(),
            Check::Proposition => sweep.q.iter().map(Some).collect(),
            Check::Transference => vec![None],
        };
        for p in params {
            let rb = RowBuilder {
                vector: &spec.name,
                check,
                parameter: p.map_or(String::new(), rational::format),
            };
            let out = match (&r, check, p) {
                (_, Check::Theorem2, Some(d)) => theorem2_row(&rb, spec, d),
                (Err(e), _, _) => Err(e.clone()),
                (Ok(r), Check::Theorem1, Some(d)) => theorem1_row(&rb, r, d, sweep),
                (Ok(r), Check::Proposition, Some(q)) => proposition_row(&rb, r, q),
                (Ok(r), Check::Transference, _) => transference_row(&rb, r),
                _ => unreachable!("every check has its parameter"),
            };
            rows.push(out.unwrap_or_else(|e| rb.from_error(e)));
        }
    }
    rows
}

/// One row per (vector, parameter, check), in input order.
pub fn run_sweep(sweep: &Sweep) -> Vec<Row> {
    sweep.vectors.iter().flat_map(|v| rows_for(v, sweep)).collect()
}

pub fn rows_to_csv(rows: &[Row]) -> Result<String, CliError> {
    let io = |e: csv::Error| CliError::Input(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["schema"];
    header.extend(CSV_HEADER);
    w.write_record(&header).map_err(io)?;
    for r in rows {
        let check = serde_json::to_value(r.check).expect("check names serialize");
        w.write_record([
            crate::commands::CSV_SCHEMA,
            &r.vector,
            check.as_str().unwrap_or_default(),
            &r.parameter,
            &r.value,
            &r.bound,
            &r.pass.map_or(String::new(), |p| p.to_string()),
            &r.status,
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::SweepSpec;
    use std::path::Path;

    fn sweep(text: &str) -> Sweep {
        SweepSpec::from_json(text).unwrap().resolve(Path::new(".")).unwrap()
    }

    #[test]
    fn rational_theorem2_is_skipped() {
        let rows = run_sweep(&sweep(r#"{"vectors":["half"],"delta":["1/4"],"checks":["theorem2"]}"#));
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].pass, None);
        assert!(rows[0].status.starts_with("skipped: hypothesis"));
        assert!(summarize(&rows).all_pass());
    }

    #[test]
    fn transference_row_for_sqrt2_sum() {
        let rows = run_sweep(&sweep(r#"{"vectors":["sqrt2-sum"],"checks":["transference"]}"#));
        assert_eq!(rows[0].pass, Some(true), "{:?}", rows[0]);
    }

    #[test]
    fn theorem2_rows_for_golden() {
        let rows = run_sweep(&sweep(r#"{"vectors":["golden"],"delta":["1/4","1/8"],"checks":["theorem2"]}"#));
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.pass == Some(true)), "{rows:?}");
        assert_eq!(rows[0].value, "2");
    }

    #[test]
    fn csv_has_versioned_header() {
        let rows = run_sweep(&sweep(r#"{"vectors":["half"],"delta":["1/4"],"checks":["theorem2"]}"#));
        let csv = rows_to_csv(&rows).unwrap();
        assert!(csv.starts_with("schema,vector,check,parameter,value,bound,pass,status\nergotime/1,half,theorem2"));
    }
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ergotime(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergotime"))
        .args(args)
        .env_remove("ERGOTIME_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SUM_SPEC: &str = r#"{
  "name": "sqrt2-sum-file",
  "constants": [{"kind": "one", "symbol": "1"}, {"kind": "sqrt", "symbol": "s2", "radicand": 2}],
  "entries": [["1", "0"], ["0", "1"], ["1", "1"]],
  "independence_attestation": "1 and sqrt(2) are independent over Q"
}"#;

#[test]
fn analyze_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "v.json", SUM_SPEC);
    let out = ergotime(&["analyze", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["result"]["d"], 2);
    assert_eq!(j["result"]["c_alpha"], "3");
    assert_eq!(j["result"]["q_alpha"], "1");
}

#[test]
fn analyze_half() {
    let out = ergotime(&["analyze", "--vector", "half"]);
    let j = json_of(&out);
    assert_eq!(j["result"]["d"], 1);
    let csv = ergotime(&["analyze", "--vector", "half", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.contains("\"[[2, 1]]\""), "{text}");
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{ not json");
    assert_eq!(ergotime(&["analyze", "--spec", &bad]).status.code(), Some(2));
    let zero = write(
        dir.path(),
        "zero.json",
        r#"{"name":"z","constants":[{"kind":"one","symbol":"1"}],"entries":[["0"],["0"]]}"#,
    );
    assert_eq!(ergotime(&["analyze", "--spec", &zero]).status.code(), Some(2));
    assert_eq!(ergotime(&["analyze"]).status.code(), Some(2));
    assert_eq!(ergotime(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ergotime(&["psi", "--vector", "sqrt2", "--Q", "x"]).status.code(), Some(2));
}

#[test]
fn hypothesis_violation_is_named() {
    let out = ergotime(&["approx", "--vector", "sqrt2", "--Q", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis"));
}

#[test]
fn psi_query() {
    let out = ergotime(&["psi", "--vector", "sqrt2", "--Q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    // sup norm over all coordinates: (-3, 2) is the best vector of height 5
    assert_eq!(j["result"]["witness"], serde_json::json!([-3, 2]));
    let lo: f64 = j["result"]["value"]["lo"].as_str().unwrap().parse().unwrap();
    assert!((lo - 5.828427).abs() < 1e-5);
}

#[test]
fn ergodize_query() {
    let out = ergotime(&["ergodize", "--vector", "sqrt2", "--delta", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    let t_hi = ergotime::rational::parse(j["result"]["t_hi"].as_str().unwrap()).unwrap();
    assert!(t_hi <= ergotime::rational::parse("656.1").unwrap());
    assert_eq!(j["result"]["within_bound"], true);
}

#[test]
fn circle_query() {
    let out = ergotime(&["circle", "--alpha", "golden", "--delta", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["result"]["N"], 2);
    assert_eq!(j["result"]["pass"], true);
    assert!(j["result"]["bound"].is_string());
    let rational = json_of(&ergotime(&["circle", "--alpha", "1/3", "--delta", "1/4"]));
    assert!(rational["result"]["N"].is_null());
}

#[test]
fn verify_theorem1_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = write(
        dir.path(),
        "s.json",
        r#"{"vectors": ["sqrt2"], "delta": ["1", "1/2", "1/4"], "checks": ["theorem1"]}"#,
    );
    let out = ergotime(&["verify", "--sweep", &sweep]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "schema,vector,check,parameter,value,bound,pass,status");
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true,pass")), "{text}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("3 passed"));
}

#[test]
fn verify_rational_theorem2_skips() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = write(
        dir.path(),
        "s.json",
        r#"{"vectors": ["half"], "delta": ["1/4", "1/8"], "checks": ["theorem2"]}"#,
    );
    let out = ergotime(&["verify", "--sweep", &sweep]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("skipped: hypothesis").count(), 2);
}

#[test]
fn verify_proposition_sweep_with_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "v.json", SUM_SPEC);
    let sweep = write(
        dir.path(),
        "s.json",
        r#"{"vectors": ["sqrt2", {"file": "v.json"}], "Q": ["8", "16"], "checks": ["proposition", "transference"]}"#,
    );
    let out = ergotime(&["verify", "--sweep", &sweep, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let j = json_of(&out);
    assert_eq!(j["summary"]["failed"], 0);
    assert_eq!(j["summary"]["rows"], 6);
}

#[test]
fn reports_are_deterministic_and_lossless() {
    let run = || {
        let mut j = json_of(&ergotime(&["approx", "--vector", "sqrt2-sum", "--Q", "8"]));
        j.as_object_mut().unwrap().remove("wall_time_ms");
        j
    };
    let a = run();
    assert_eq!(a, run());
    assert_eq!(a["pass"], true);
    // exact strings re-parse to the same rationals
    let q = a["result"]["approximation"]["q"].as_str().unwrap();
    assert_eq!(ergotime::rational::format(&ergotime::rational::parse(q).unwrap()), q);
}

#[test]
fn out_file_and_precision_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = Command::new(env!("CARGO_BIN_EXE_ergotime"))
        .args(["psi", "--vector", "golden", "--Q", "8", "--out", path.to_str().unwrap()])
        .env("ERGOTIME_PRECISION_BITS", "4096")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let j: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(j["command"], "psi");
    let bad = Command::new(env!("CARGO_BIN_EXE_ergotime"))
        .args(["psi", "--vector", "golden", "--Q", "8"])
        .env("ERGOTIME_PRECISION_BITS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

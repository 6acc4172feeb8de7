use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_advisor-game")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn optimal_reports_the_canonical_equilibrium() {
    let v = json(&["optimal"]);
    assert!((v["sE_star"].as_f64().unwrap() - 30.0 / 13.0).abs() < 1e-15);
    assert!((v["delta"].as_f64().unwrap() - 4.0 / 13.0).abs() < 1e-15);
    assert!((v["loss"].as_f64().unwrap() - 1.0 / 26.0).abs() < 1e-15);
}

#[test]
fn text_output_round_trips_floats() {
    let out = run(&["optimal", "--p", "0.3", "--rE", "2.5", "--sP", "-4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&["optimal", "--p", "0.3", "--rE", "2.5", "--sP", "-4"]);
    for line in stdout(&out).lines() {
        let (key, value) = line.split_once(" = ").unwrap();
        let parsed: f64 = value.parse().unwrap();
        assert_eq!(parsed.to_bits(), v[key].as_f64().unwrap().to_bits(), "{key}");
    }
}

#[test]
fn naive_recommends_the_target() {
    assert_eq!(json(&["naive", "--r", "-2.75"])["sE_star"].as_f64(), Some(-2.75));
}

#[test]
fn decide_applies_the_belief_rules() {
    let v = json(&["decide", "--sE", "3"]);
    assert_eq!(v["d0"].as_f64(), Some(1.5));
    let v = json(&["decide", "--sE", "3", "--with-ai", "--sP", "0"]);
    assert_eq!(v["d1"].as_f64(), Some(1.0));
}

#[test]
fn config_file_feeds_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    fs::write(
        &path,
        r#"{"sigma0_sq": 2, "sigmaE_sq": 2, "sigmaP_sq": 2, "p": 0.5, "r": 1, "sP": 0,
            "trust": {"rE_high": 3, "cost": 0.1},
            "sweep": {"param": "p", "from": 0, "to": 1, "steps": 101, "quantity": "threshold"}}"#,
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    assert!((json(&["optimal", "--config", cfg])["loss"].as_f64().unwrap() - 1.0 / 26.0).abs() < 1e-15);
    assert_eq!(json(&["trust", "--config", cfg])["invest"], Value::Bool(true));

    let csv = dir.path().join("threshold.csv");
    let v = json(&["sweep", "--config", cfg, "--out", csv.to_str().unwrap()]);
    assert_eq!(v["rows"].as_u64(), Some(101));
    assert!(fs::read_to_string(&csv).unwrap().contains("param,value"));
}

#[test]
fn bad_config_is_rejected_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"rE": 1, "sigmaE_sq": 2}"#).unwrap();
    let out = run(&["optimal", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());

    fs::write(&path, r#"{"sweep": {"param": "p", "from": 0, "to": 1, "steps": 11, "quantity": "loss", "stepz": 3}}"#).unwrap();
    let out = run(&["optimal", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep.stepz"));
}

#[test]
fn exit_codes_distinguish_failures() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["optimal", "--p", "half"]).status.code(), Some(2));
    assert_eq!(run(&["optimal", "--p", "1.5"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--minimizer", "simplex"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nowhere").join("out.csv");
    let out = run(&["sweep", "--preset", "loss-vs-p", "--out", missing.to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_and_simulate_are_deterministic() {
    let args = ["--json", "verify", "--trials", "100", "--seed", "9", "--n", "50000"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, run(&args).stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["passed"], Value::Bool(true));

    let a = json(&["simulate", "--sE", "30", "--n", "100000", "--seed", "4"]);
    let b = json(&["simulate", "--sE", "30", "--n", "100000", "--seed", "4"]);
    assert_eq!(a, b);
    let c = json(&["simulate", "--sE", "30", "--n", "100000", "--seed", "5"]);
    assert_ne!(a["mean"], c["mean"]);
}

#[test]
fn grid_minimizer_is_selectable() {
    let v = json(&["verify", "--trials", "20", "--minimizer", "grid", "--n", "10000"]);
    assert_eq!(v["minimizer"].as_str(), Some("grid"));
    assert_eq!(v["passed"], Value::Bool(true));
}

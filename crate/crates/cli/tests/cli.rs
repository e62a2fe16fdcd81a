use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mubw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mubw")).args(args).env_remove("MUBW_SEED").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn build_then_check_detects_canonical_state() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let b = mubw(&["build", "--d", "3", "--angles", "pi,pi,0,0", "--out", p(&w)]);
    assert_eq!(code(&b), 0, "{}", String::from_utf8_lossy(&b.stderr));
    let o = mubw(&["check-state", "--state", "canonical", "--witness", p(&w)]);
    assert_eq!(code(&o), 3);
    let r = json(&o);
    let v = r["witness_values"][0]["value"].as_f64().unwrap();
    assert!((v + 2.0 / 15.0).abs() < 1e-12, "{v}");
    assert_eq!(r["verdict"], "detected");
    assert_eq!(r["ppt"], true);
}

#[test]
fn maximally_mixed_state_is_not_detected() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("mixed.json");
    let mut entries = Vec::new();
    for i in 0..9 {
        for j in 0..9 {
            entries.push(serde_json::json!([if i == j { 1.0 / 9.0 } else { 0.0 }, 0.0]));
        }
    }
    std::fs::write(&state, serde_json::json!({"rows": 9, "cols": 9, "entries": entries}).to_string()).unwrap();
    let o = mubw(&["check-state", "--state", p(&state), "--angles", "pi,pi,0,0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["detected"], false);
    assert!(r["witness_values"][0]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn build_output_is_reproducible_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(code(&mubw(&["build", "--d", "3", "--angles", "2pi/3,-pi/5,0.25", "--out", p(&a)])), 0);
    assert_eq!(code(&mubw(&["build", "--d", "3", "--angles", "2pi/3,-pi/5,0.25", "--out", p(&b)])), 0);
    let ta = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ta, std::fs::read_to_string(&b).unwrap());
    let f = mubw_core::witness::WitnessFile::from_json(&ta).unwrap();
    assert_eq!(f.to_json(), ta.trim_end());
    let rebuilt = mubw_core::witness::build_witness(&f.spec).unwrap();
    assert_eq!(rebuilt.max_abs_diff(&f.witness), 0.0);
}

#[test]
fn invalid_input_is_a_usage_error() {
    assert_eq!(code(&mubw(&["build", "--d", "3", "--angles", "pi,banana"])), 2);
    assert_eq!(code(&mubw(&["build", "--d", "3", "--perms", "0,0,1"])), 2);
    assert_eq!(code(&mubw(&["build", "--d", "4"])), 2);
    assert_eq!(code(&mubw(&["check-state", "--state", "/nonexistent/state.json"])), 2);
    assert_eq!(code(&mubw(&["scan", "--family", "single-7"])), 2);
    assert_eq!(code(&mubw(&["verify", "weyl", "--d", "6"])), 2);
    assert_eq!(code(&mubw(&["frobnicate"])), 2);
}

#[test]
fn perms_build_the_reduction_witness_for_d5() {
    let o = mubw(&["build", "--d", "5"]);
    assert_eq!(code(&o), 0);
    let f = mubw_core::witness::WitnessFile::from_json(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    assert_eq!(f.spec.l, 6);
    assert!((f.witness.trace().re - 20.0).abs() < 1e-10);
}

#[test]
fn scan_csv_has_header_and_all_points() {
    let o = mubw(&["scan", "--L", "2", "--grid", "6", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "phi1,phi2,value");
    assert_eq!(lines.len(), 1 + 36);
    for l in &lines[1..] {
        assert_eq!(l.split(',').count(), 3);
    }
}

#[test]
fn scan_json_finds_detection_on_default_grid() {
    let o = mubw(&["scan"]);
    assert_eq!(code(&o), 3);
    let r = json(&o);
    assert!(r["min_value"].as_f64().unwrap() <= -2.0 / 15.0 + 1e-12);
    assert_eq!(r["report"]["verdict"], "detected");
}

#[test]
fn classify_labels() {
    let psd = json(&mubw(&["classify", "--angles", "pi,0,0", "--restarts", "4"]));
    assert_eq!(psd["label"], "positive-semidefinite");
    let proper = json(&mubw(&["classify", "--angles", "pi,pi,0,0", "--restarts", "8"]));
    assert_eq!(proper["label"], "proper-witness");
    assert!(proper["min_eig"].as_f64().unwrap() < 0.0);
}

#[test]
fn classify_flags_a_non_block_positive_operator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("swap.json");
    let mut entries = Vec::new();
    for r in 0..4 {
        for c in 0..4 {
            let swapped = (r % 2) * 2 + r / 2;
            let v = if c == swapped { 1.0 } else { 0.0 } - if r == 0 && c == 0 { 2.0 } else { 0.0 };
            entries.push(serde_json::json!([v, 0.0]));
        }
    }
    std::fs::write(&path, serde_json::json!({"rows": 4, "cols": 4, "entries": entries}).to_string()).unwrap();
    let o = mubw(&["classify", "--witness", p(&path), "--restarts", "8"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["label"], "not-block-positive");
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_mubw"))
            .args(["classify", "--angles", "pi,pi,0,0", "--restarts", "3", "--max-iters", "5"])
            .env("MUBW_SEED", seed)
            .output()
            .unwrap()
    };
    let a = json(&run("17"));
    assert_eq!(a["config"]["seed"], 17);
    assert_eq!(a, json(&run("17")));
    assert_ne!(a["x"], json(&run("18"))["x"]);
    let flag = json(&mubw(&["classify", "--angles", "pi,pi,0,0", "--restarts", "3", "--max-iters", "5", "--seed", "17"]));
    assert_eq!(a, flag);
}

#[test]
fn verify_suites() {
    for (args, expected) in [
        (&["verify", "mub"][..], 0),
        (&["verify", "weyl", "--d", "5"][..], 0),
        (&["verify", "closedform"][..], 0),
        (&["verify", "theorem1", "--samples", "200"][..], 0),
        (&["verify", "theorem1", "--d", "5", "--samples", "100"][..], 0),
    ] {
        let o = mubw(args);
        let out = String::from_utf8_lossy(&o.stdout);
        assert_eq!(code(&o), expected, "{args:?}\n{out}");
        assert!(!out.contains("FAIL"), "{out}");
    }
}

#[test]
fn verify_numbers_reports_the_realignment_mismatch() {
    let o = mubw(&["verify", "paper-numbers", "--format", "json"]);
    assert_eq!(code(&o), 4);
    let r = json(&o);
    assert_eq!(r["passed"], false);
    let failed: Vec<&str> =
        r["checks"].as_array().unwrap().iter().filter(|c| c["pass"] == false).map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(failed, ["realignment R = 1"]);
}

#[test]
fn export_mubs_round_trips_through_build() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("mubs.json");
    assert_eq!(code(&mubw(&["export-mubs", "--d", "3", "--out", p(&m)])), 0);
    let a = mubw(&["build", "--d", "3", "--angles", "pi,pi,0,0"]);
    let b = mubw(&["build", "--d", "3", "--angles", "pi,pi,0,0", "--mubs-file", p(&m)]);
    let wa = mubw_core::witness::WitnessFile::from_json(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    let wb = mubw_core::witness::WitnessFile::from_json(std::str::from_utf8(&b.stdout).unwrap()).unwrap();
    assert!(wa.witness.max_abs_diff(&wb.witness) < 1e-15);
    let weyl = mubw(&["export-mubs", "--d", "7", "--source", "prime-weyl"]);
    assert_eq!(code(&weyl), 0);
    assert_eq!(code(&mubw(&["export-mubs", "--d", "3", "--source", "magic"])), 2);
}

//! End-to-end tests of the `acidlab` binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_acidlab"))
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_defaults_to_symmetric_point() {
    let out = bin().arg("classify").output().unwrap();
    let rep = stdout_json(&out);
    assert_eq!(rep["classification"]["case_tag"], "T11_i");
    assert_eq!(rep["classification"]["predicted_attractor"], "heterogeneous");
}

#[test]
fn classify_flags_override_defaults() {
    let out = bin().args(["classify", "--a1", "2.0", "--d2", "0.25"]).output().unwrap();
    let rep = stdout_json(&out);
    assert_eq!(rep["params"]["a1"], 2.0);
    assert_eq!(rep["d2_over_r"], 0.25);
}

#[test]
fn thresholds_emits_six_values() {
    let out = bin().args(["thresholds", "--a1", "0.5", "--a2", "0.5", "--d1", "0.5"]).output().unwrap();
    let rep = stdout_json(&out);
    for key in ["d1h", "d2h", "d1c", "d2c", "d1r", "d2r"] {
        assert!(rep["thresholds"].get(key).is_some(), "missing {key}");
    }
    assert!(rep["d1h_alternate"].is_number());
}

#[test]
fn invalid_parameter_exits_2() {
    let out = bin().args(["classify", "--a1=-1.0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["thresholds", "--d1", "0.0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_field_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"t_endd": 1.0}"#).unwrap();
    let out = bin().args(["simulate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

fn run_simulate(dir: &Path, seed: &str) {
    let out = bin()
        .args([
            "simulate",
            "--t-end", "1.0",
            "--sample-every", "0.25",
            "--n-cells", "32",
            "--seed", seed,
            "--svg",
            "--out-dir",
        ])
        .arg(dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn simulate_artifacts_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    run_simulate(&a, "3");
    run_simulate(&b, "3");
    run_simulate(&c, "4");
    for name in ["trajectory.csv", "snapshot.csv", "summary.json", "norms.svg"] {
        assert!(a.join(name).exists(), "missing {name}");
    }
    let ta = std::fs::read(a.join("trajectory.csv")).unwrap();
    let tb = std::fs::read(b.join("trajectory.csv")).unwrap();
    let tc = std::fs::read(c.join("trajectory.csv")).unwrap();
    assert_eq!(ta, tb, "same seed must reproduce byte-identical output");
    assert_ne!(ta, tc, "different seeds should perturb the trajectory");
    assert_eq!(
        std::fs::read(a.join("snapshot.csv")).unwrap(),
        std::fs::read(b.join("snapshot.csv")).unwrap()
    );
}

#[test]
fn simulate_reads_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_path = tmp.path().join("run.json");
    std::fs::write(
        &cfg_path,
        r#"{"t_end": 0.5, "sample_every": 0.25, "grid": {"n_cells": 32, "length": 1.0}}"#,
    )
    .unwrap();
    let out = bin().args(["simulate", "--config"]).arg(&cfg_path).output().unwrap();
    let rep = stdout_json(&out);
    assert_eq!(rep["t_end"], 0.5);
    assert_eq!(rep["grid"]["n_cells"], 32);
}

#[test]
fn verify_passes_on_a_certified_point() {
    let out = bin()
        .args([
            "verify",
            "--t-end", "3.0",
            "--sample-every", "0.25",
            "--n-cells", "32",
        ])
        .output()
        .unwrap();
    let rep = stdout_json(&out);
    assert_eq!(rep["passed"], true);
    assert_eq!(rep["checks"]["lyapunov"]["status"], "pass");
    assert_eq!(rep["checks"]["sandwich"]["status"], "pass");
}

#[test]
fn verify_wrong_target_exits_4() {
    // The dynamics head to the heterogeneous state here, so bounding the
    // trajectory by the healthy-state sandwich must fail.
    let out = bin()
        .args([
            "verify",
            "--target", "healthy",
            "--t-end", "3.0",
            "--sample-every", "0.25",
            "--n-cells", "32",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["passed"], false);
}

#[test]
fn scan_csv_goes_to_stdout() {
    let out = bin()
        .args([
            "scan",
            "--d1-min", "0.2", "--d1-max", "1.0", "--d1-count", "2",
            "--d2-min", "0.2", "--d2-max", "1.0", "--d2-count", "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "d1,d2_over_r,case_tag,predicted_attractor,certificate_found,attained");
}

#[test]
fn scan_writes_csv_and_svg() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "scan",
            "--d1-min", "0.2", "--d1-max", "1.0", "--d1-count", "3",
            "--d2-min", "0.2", "--d2-max", "1.0", "--d2-count", "3",
            "--action", "certificate",
            "--out-dir",
        ])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(tmp.path().join("scan.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10);
    let svg = std::fs::read_to_string(tmp.path().join("scan.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

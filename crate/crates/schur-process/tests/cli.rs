//! End-to-end tests of the schur-dpp binary: exit codes, report shape,
//! config precedence, and byte-identical reruns.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schur-dpp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn rho_measure_roundtrip() {
    let out = run(&["rho", "--measure", "--x", "0.5", "--y", "0.5", "--t=-1,0", "--n", "40", "--nodes", "64"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "rho");
    assert_eq!(v["T"], serde_json::json!([-1, 0]));
    assert_eq!(v["pass"], true);
    assert!(v["abs_diff"].as_f64().unwrap() < 1e-6);
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let args = ["rho", "--measure", "--x", "0.5,0.3", "--y", "0.4,0.2", "--t=0", "--n", "30", "--nodes", "64"];
    let a = bin().args(args).env("SCHUR_DPP_THREADS", "1").output().unwrap();
    let b = bin().args(args).env("SCHUR_DPP_THREADS", "4").output().unwrap();
    let c = run(&args);
    assert!(a.status.success() && b.status.success() && c.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn kernel_process_report_shape() {
    let out = run(&["kernel", "--process", "--levels", "2", "--x", "0.3", "--point", "1,0", "--point", "2,-1", "--nodes", "64"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["flavor"], "process");
    assert_eq!(v["T"], serde_json::json!([[1, 0], [2, -1]]));
    assert_eq!(v["entries"].as_array().unwrap().len(), 4);
    assert_eq!(v["nodes"], 64);
    assert!(v["est_error"].as_f64().unwrap() < 1e-6);
    assert!(v["det"].as_f64().is_some());
    assert_eq!(v["radii"].as_array().unwrap().len(), 2);
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("schur-dpp-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"x": [0.5], "t": [0], "n": 40, "nodes": 64}"#).unwrap();
    let base = run(&["rho", "--config", cfg.to_str().unwrap()]);
    assert!(base.status.success(), "stderr: {}", String::from_utf8_lossy(&base.stderr));
    assert_eq!(stdout_json(&base)["T"], serde_json::json!([0]));
    // a flag overrides the config value
    let flag = run(&["rho", "--config", cfg.to_str().unwrap(), "--t=-1"]);
    assert_eq!(stdout_json(&flag)["T"], serde_json::json!([-1]));
    // unknown keys are usage errors
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"x": [0.5], "t": [0], "radius": 2.0}"#).unwrap();
    let out = run(&["rho", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radius"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_flag_writes_file_and_csv_projects() {
    let dir = std::env::temp_dir().join(format!("schur-dpp-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let out = run(&[
        "verify", "--suite", "eigenfunction", "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("schema,1"));
    assert!(text.contains("checks.0.pass,true"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    // verification failure: an unreachable tolerance gives exit 1
    let fail = run(&["rho", "--x", "0.5", "--t=0", "--n", "30", "--nodes", "64", "--tol", "1e-30"]);
    assert_eq!(fail.status.code(), Some(1));
    // usage errors give exit 2
    assert_eq!(run(&["rho", "--t=0"]).status.code(), Some(2)); // missing --x
    assert_eq!(run(&["verify", "--suite", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(run(&["rho", "--x", "0.5", "--t=0", "--format", "xml"]).status.code(), Some(2));
    // clap-level parse errors too
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    // numeric module errors surface as usage errors with the message
    let bad = run(&["kernel", "--x", "0.5", "--t=0", "--radii", "0.3", "0.6", "--nodes", "64"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("window"));
}

#[test]
fn verify_suites_all_pass() {
    for suite in ["eigenfunction", "normalization", "contour", "cauchy-truncation", "determinant"] {
        let out = run(&["verify", "--suite", suite]);
        assert!(
            out.status.success(),
            "suite {suite} failed: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        assert_eq!(stdout_json(&out)["pass"], true, "suite {suite}");
    }
}

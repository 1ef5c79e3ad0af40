use std::process::{Command, Output};

fn nct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nct")).args(args).env_remove("NCT_BUDGET").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn build_then_check_gaunt() {
    let dir = tempfile::tempdir().unwrap();
    let cell = dir.path().join("c2.json");
    let iso = dir.path().join("e.json");
    let o = nct(&["build", "cell", "--n", "2", "--k", "2", "-o", cell.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = nct(&["check", "gaunt", cell.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["gaunt"], true);

    assert_eq!(code(&nct(&["build", "E", "--n", "1", "-o", iso.to_str().unwrap()])), 0);
    let o = nct(&["check", "gaunt", iso.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["failing_level"], 1);
}

#[test]
fn build_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    assert_eq!(code(&nct(&["build", "cell", "--n", "2", "-o", out.to_str().unwrap()])), 2);
    assert_eq!(code(&nct(&["build", "cell", "--n", "1", "--k", "3", "-o", out.to_str().unwrap()])), 2);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 1}").unwrap();
    assert_eq!(code(&nct(&["check", "gaunt", bad.to_str().unwrap()])), 2);
}

#[test]
fn enum_theta_level_one() {
    let o = nct(&["enum", "theta", "--n", "1", "--max-size", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "[0]\n[1]\n[2]\n[3]\n");
}

#[test]
fn verify_writes_report_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = nct(&["verify", "autos", "--n", "2", "--format", "json", "--report", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["suite"], "autos");
    assert_eq!(report["passed"], true);
    assert!(report.get("elapsed_ms").is_none());

    let o = nct(&["verify", "kernel-laws", "--n", "1", "--fault"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8(o.stdout).unwrap().contains("FAIL"));

    assert_eq!(code(&nct(&["verify", "autos", "--n", "0"])), 2);
    assert_eq!(code(&nct(&["verify", "no-such-suite", "--n", "1"])), 2);
    assert_eq!(code(&nct(&["verify", "upsilon-closure", "--n", "2"])), 2);
    assert_eq!(code(&nct(&["verify", "autos", "--n", "3", "--budget", "10"])), 3);
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_nct"))
        .args(["verify", "autos", "--n", "3"])
        .env("NCT_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn timing_is_opt_in() {
    let o = nct(&["verify", "pushout-calculus", "--n", "1", "--format", "json", "--timing"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report["elapsed_ms"].as_u64().is_some());
}

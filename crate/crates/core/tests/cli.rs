use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::{json, Value};

fn run(args: &[&str], config: Option<&Value>, dir: &Path) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_subshift"));
    cmd.args(args).arg("--out").arg(dir.join("out"));
    if let Some(c) = config {
        let path = dir.join("config.json");
        fs::write(&path, c.to_string()).unwrap();
        cmd.arg("--config").arg(path);
    }
    let code = cmd.output().unwrap().status.code().unwrap();
    let record = fs::read_to_string(dir.join("out/run.json"))
        .ok()
        .map(|s| serde_json::from_str(&s).unwrap())
        .unwrap_or(Value::Null);
    (code, record)
}

#[test]
fn unknown_verb_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(&["frobnicate"], None, dir.path());
    assert_eq!(code, 2);
}

#[test]
fn unknown_config_field_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(&["complexity"], Some(&json!({"bogus": 1})), dir.path());
    assert_eq!(code, 2);
}

#[test]
fn complexity_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let (code, record) = run(&["complexity"], Some(&json!({"n_max": 6})), dir.path());
    assert_eq!(code, 0);
    assert_eq!(record["status"], "ok");
    let table = fs::read_to_string(dir.path().join("out/complexity.csv")).unwrap();
    assert_eq!(table.lines().count(), 7);
}

#[test]
fn complexity_over_budget_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let config = json!({"n_max": 40, "budget": 10});
    let (code, record) = run(&["complexity"], Some(&config), dir.path());
    assert_eq!(code, 3);
    assert_eq!(record["exit_code"], 3);
}

#[test]
fn thm2_ledger_has_no_violations() {
    let dir = tempfile::tempdir().unwrap();
    let (code, record) = run(&["thm2-ledger"], None, dir.path());
    assert_eq!(code, 0, "{record}");
    let checks = fs::read_to_string(dir.path().join("out/thm2_checks.csv")).unwrap();
    assert!(!checks.contains("Violated"));
}

#[test]
fn thm1_verify_reports_only_complexity_failures() {
    let dir = tempfile::tempdir().unwrap();
    let (code, record) = run(&["thm1-verify"], Some(&json!({"levels": 1})), dir.path());
    assert_eq!(code, 1, "{record}");
    let failures = record["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    for f in failures {
        assert!(f.as_str().unwrap().contains("p(n_"), "{f}");
    }
}

#[test]
fn same_seed_same_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for tag in ["a", "b"] {
        let sub = dir.path().join(tag);
        fs::create_dir_all(&sub).unwrap();
        let (code, _) = run(&["cover", "--seed", "5"], None, &sub);
        assert_eq!(code, 0);
        outputs.push(fs::read(sub.join("out/measure.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

use std::process::{Command, Output};

use serde_json::Value;

fn spaceability(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spaceability")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn marcinkiewicz_witness_verifies() {
    let out = spaceability(&["witness", "--theorem", "4", "--psi", "pow:0.5", "--phi", "pow:1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    let claims = r["claims"].as_array().unwrap();
    assert!(!claims.is_empty());
    assert!(claims.iter().all(|c| c["satisfied"] == Value::Bool(true)));
}

#[test]
fn orlicz_norm_of_indicator() {
    let out = spaceability(&["norm", "--space", "orlicz", "--psi", "pow:2", "--fn", "indicator:0,0.25"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = report(&out)["value"].as_f64().unwrap();
    assert!((v - 0.5).abs() < 1e-9, "{v}");
}

#[test]
fn malformed_descriptor_is_a_schema_error() {
    let out = spaceability(&["norm", "--space", "orlicz", "--psi", "pow:2", "--fn", "indicator:0,oops"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("schema error:"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn violated_precondition_is_reported_as_such() {
    let out = spaceability(&["witness", "--theorem", "4", "--psi", "pow:1", "--phi", "pow:0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("precondition error:"), "{}", stderr(&out));
}

#[test]
fn inconclusive_exits_two() {
    let out = spaceability(&[
        "norm",
        "--space",
        "seq-nakano",
        "--fn",
        "geom:1,0.5",
        "--exponent",
        "harmonic:2,1",
        "--weights",
        "geom:1,0.5",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert_eq!(report(&out)["status"], "inconclusive");
}

#[test]
fn geometric_sequence_norm() {
    // sum of 4^-n 2^-n / s^2 = 1 at s = 7^-1/2
    let out = spaceability(&[
        "norm",
        "--space",
        "seq-nakano",
        "--fn",
        "geom:1,0.5",
        "--exponent",
        "const:2",
        "--weights",
        "geom:1,0.5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = report(&out)["value"].as_f64().unwrap();
    assert!((v - 7f64.powf(-0.5)).abs() < 1e-8, "{v}");
}

#[test]
fn out_and_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let out = spaceability(&[
        "rearrange",
        "--fn",
        "indicator:0.5,0.75",
        "--out",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let _: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let rows = std::fs::read_to_string(&csv).unwrap();
    let mut lines = rows.lines();
    assert_eq!(lines.next(), Some("t,value"));
    assert_eq!(lines.count(), 1000);
}

#[test]
fn csv_rejected_where_there_is_none() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let out = spaceability(&["check", "--space", "lorentz", "--phi", "pow:0.5", "--phi", "pow:1", "--csv"]);
    assert_eq!(out.status.code(), Some(1), "usage errors are input errors");
    let out = spaceability(&[
        "check",
        "--space",
        "lorentz",
        "--phi",
        "pow:0.5",
        "--phi",
        "pow:1",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("schema error:"));
}

#[test]
fn scenario_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(&path, r#"{"command":"norm","space":"orlicz","psi":["pow:2"],"fn":"indicator:0,0.25"}"#).unwrap();
    let from_file = spaceability(&["run", path.to_str().unwrap()]);
    let from_flags = spaceability(&["norm", "--space", "orlicz", "--psi", "pow:2", "--fn", "indicator:0,0.25"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    assert_eq!(from_file.stdout, from_flags.stdout);
}

#[test]
fn scenario_with_unknown_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(&path, r#"{"command":"norm","colour":"blue"}"#).unwrap();
    let out = spaceability(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("schema error:"));
}

#[test]
fn output_is_byte_stable() {
    let args = ["witness", "--theorem", "6", "--fn", "pow:-0.25", "--psi", "pow:2"];
    let a = spaceability(&args);
    let b = spaceability(&args);
    assert!(!a.stdout.is_empty(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn check_reports_direction() {
    let holds = spaceability(&["check", "--space", "lorentz", "--phi", "pow:0.5", "--phi", "pow:1"]);
    assert_eq!(holds.status.code(), Some(0), "{}", stderr(&holds));
    let fails = spaceability(&["check", "--space", "lorentz", "--phi", "pow:1", "--phi", "pow:0.5"]);
    assert_eq!(fails.status.code(), Some(1));
    let nakano = spaceability(&["check", "--space", "nakano", "--exponent", "const:3", "--exponent", "const:2"]);
    assert_eq!(nakano.status.code(), Some(0));
    assert_eq!(report(&nakano)["holds"], Value::Bool(true));
}

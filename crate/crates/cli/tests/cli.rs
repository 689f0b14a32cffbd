use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgla-deform")).args(args).output().unwrap()
}

fn path(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel).to_string_lossy().into_owned()
}

#[test]
fn minimal_scenario_passes() {
    let out = bin(&["run", &path("scenarios/minimal_o1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("h0=2 h1=0"));
    assert!(text.ends_with("verdict: pass\n"));
}

#[test]
fn json_report_is_versioned() {
    let out = bin(&["run", &path("scenarios/minimal_o1.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["checks"][0]["result"]["dims"], serde_json::json!([2, 0]));
}

#[test]
fn window_override() {
    let out = bin(&["run", &path("scenarios/minimal_o1.json"), "--window", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("scenario minimal_o1 (window 6)"));
    let out = bin(&["run", &path("scenarios/minimal_o1.json"), "--window", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn hypothesis_violation_exits_2() {
    let out = bin(&["run", &path("tests/fixtures/triangle_no_overlap.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("hypothesis violated"));
}

#[test]
fn malformed_file_exits_1_with_location() {
    let out = bin(&["run", &path("tests/fixtures/malformed.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 5, column 29"));
    let out = bin(&["validate", &path("tests/fixtures/malformed.json")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_check_exits_1() {
    let out = bin(&["validate", &path("tests/fixtures/unknown_check.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown check `moduli_space`"));
}

#[test]
fn missing_file_exits_1() {
    assert_eq!(bin(&["run", "/nonexistent.json"]).status.code(), Some(1));
}

#[test]
fn validate_lists_objects() {
    let out = bin(&["validate", &path("scenarios/m_delta.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("systems: all, one, second"));
}

#[test]
fn selftest_passes() {
    let out = bin(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 6);
}

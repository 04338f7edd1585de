use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn etale(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_etale"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn produce_then_verify() {
    let runs: [&[&str]; 5] = [
        &["demo", "basic"],
        &["cover", "--base", "Z", "--var", "x", "--relation", "x^2 - x"],
        &["cover", "--over-r", "--base", "Z", "--var", "x", "--relation", "1 - 5*x"],
        &["standardize", "--base", "Zloc:5", "--var", "x", "--relation", "x^2 - 2"],
        &["decompose-residual", "--base", "Zloc:5", "--var", "x", "--relation", "x^3 - x"],
    ];
    for args in runs {
        let out = etale(args, None);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let again = etale(args, None);
        assert_eq!(out.stdout, again.stdout, "{args:?} is not deterministic");
        let text = String::from_utf8(out.stdout).unwrap();
        let report = etale(&["verify", "-"], Some(&text));
        assert_eq!(report.status.code(), Some(0), "{args:?}");
        assert_eq!(json(&report)["ok"], Value::Bool(true));
    }
}

#[test]
fn problem_file_on_stdin() {
    let problem = r#"{"base": {"kind": "Zloc", "p": 5}, "vars": ["x"], "relations": ["x^2 - 2"]}"#;
    let from_file = etale(&["standardize", "--input", "-"], Some(problem));
    let from_flags = etale(&["standardize", "--base", "Zloc:5", "--var", "x", "--relation", "x^2 - 2"], None);
    assert_eq!(from_file.status.code(), Some(0), "{}", String::from_utf8_lossy(&from_file.stderr));
    assert_eq!(from_file.stdout, from_flags.stdout);
}

#[test]
fn empty_certificate_warns() {
    let out = etale(&["verify", "-"], Some("{}"));
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["ok"], Value::Bool(true));
    assert!(!report["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn corrupted_certificate_names_the_path() {
    let out = etale(&["demo", "basic"], None);
    let mut cert: Value = serde_json::from_slice(&out.stdout).unwrap();
    let f = cert.pointer_mut("/result/leaves/0/f").unwrap();
    *f = Value::String("7".into());
    let out = etale(&["verify", "-"], Some(&cert.to_string()));
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["ok"], Value::Bool(false));
    let paths: Vec<&str> = report["violations"].as_array().unwrap().iter().map(|v| v["path"].as_str().unwrap()).collect();
    assert!(paths.iter().any(|p| p.starts_with("$.result.leaves[0]")), "{paths:?}");
    assert!(paths.contains(&"$.digest"), "{paths:?}");
}

#[test]
fn exit_codes() {
    let parse = etale(&["standardize", "--base", "Zloc:5", "--var", "x", "--relation", "x^ + 1"], None);
    assert_eq!(parse.status.code(), Some(2));
    let bad_base = etale(&["standardize", "--base", "Zloc:6", "--var", "x", "--relation", "x - 1"], None);
    assert_eq!(bad_base.status.code(), Some(2));
    let not_json = etale(&["verify", "-"], Some("not json"));
    assert_eq!(not_json.status.code(), Some(2));
    let two_vars = etale(&["standardize", "--base", "Zloc:5", "--var", "x", "--var", "y", "--relation", "x - y"], None);
    assert_eq!(two_vars.status.code(), Some(3), "{}", String::from_utf8_lossy(&two_vars.stderr));
    let ramified = etale(&["standardize", "--base", "Zloc:5", "--var", "x", "--relation", "x^2 - 5"], None);
    assert_eq!(ramified.status.code(), Some(4), "{}", String::from_utf8_lossy(&ramified.stderr));
    let not_flat = etale(&["standardize", "--flat-unramified", "--base", "Zloc:5", "--var", "x", "--relation", "5*x"], None);
    assert_eq!(not_flat.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&not_flat.stderr).contains("flatness witness"));
}

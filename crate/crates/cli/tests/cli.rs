//! End-to-end runs of the `transurf` binary.

use std::process::{Command, Output};

use transurf_core::expr::ResultDocument;

const F_PARABOLOID: &str = "x3+5*x1^2-6*x1*x2+2*x2^2";
const F_SEPTIC: &str = "2*x1*x3^3*x2-2*x1*x3^2*x2-3*x1*x3*x2+4*x1^2*x3*x2+10*x3^2*x2+5*x1*x2+2*x1*x3^5\
    -x3^3*x2^2+x3^3*x1^3+2*x3^5*x2-x1^3*x2-4*x1^2*x3^4-x3^7-6*x2^2+x1^3-x1^2-8*x3^4-2*x3^5-15*x3^2\
    -x3^3+x2^3+12*x2+5*x1*x3^2+9*x3^3*x1-4*x1^2*x3+2*x3^3*x2-2*x1*x2^2+x1^2*x2+6*x3*x1+4*x3*x2\
    -x3^3*x1^2-11*x3-2*x1-3*x1^2*x3^2+x3^4*x2-2*x3^2*x2^2-9";

fn transurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transurf")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn analyze_reports_translational() {
    let out = transurf(&["analyze", F_PARABOLOID]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("classification: translational\n"), "{text}");
    assert!(text.contains("certificate: vector="), "{text}");
}

#[test]
fn structured_output_is_a_valid_document() {
    let out = transurf(&["--format", "structured", "analyze", F_PARABOLOID]);
    assert_eq!(out.status.code(), Some(0));
    let doc = ResultDocument::from_json(&stdout(&out)).expect("valid document");
    assert_eq!(doc.classification, "translational");
}

#[test]
fn verify_accepts_reference_pair() {
    let out = transurf(&["verify", F_SEPTIC, "--p1", "t, (1+t^2)/t^2, 1/t", "--p2", "t^2, t^3, t"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "true\n");
}

#[test]
fn verify_rejects_wrong_pair() {
    let out = transurf(&["--format", "structured", "verify", F_PARABOLOID, "--p1", "u, u, u", "--p2", "u, u^2, 0"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verified"], false);
    assert!(!v["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn cylinder_direction() {
    let out = transurf(&["--format", "structured", "analyze", "x1^2+x2^2-1"]);
    let doc = ResultDocument::from_json(&stdout(&out)).expect("valid document");
    assert_eq!(doc.classification, "cylinder");
    assert_eq!(doc.direction, Some(["0", "0", "1"].map(String::from)));
}

#[test]
fn implicitize_uses_requested_names() {
    let out = transurf(&["--vars", "x,y,z", "implicitize", "--p1", "t, t, t^2", "--p2", "t, t^2, t^3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains('z') && !text.contains("x1"), "{text}");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["--format", "structured", "analyze", F_PARABOLOID];
    assert_eq!(transurf(&args).stdout, transurf(&args).stdout);
}

#[test]
fn parse_errors_exit_2() {
    let out = transurf(&["analyze", "x1^^2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = transurf(&["--format", "structured", "analyze", "x1 + q"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["error"]["kind"], "parse");
}

#[test]
fn unsupported_input_exits_3() {
    let out = transurf(&["analyze", "0"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn selftest_report() {
    let out = transurf(&["--format", "structured", "selftest", "--count", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = ResultDocument::from_json(&stdout(&out)).expect("valid document");
    assert_eq!(doc.classification, "report");
}

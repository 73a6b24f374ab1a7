use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn latgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latgap"))
        .args(args)
        .output()
        .expect("failed to run latgap")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = args.to_vec();
    full.push("--json");
    let out = latgap(&full);
    let value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(&out)));
    (value, out.status.code().unwrap())
}

const MEDIAN: &str = "(x1 & x2) | (x2 & x3) | (x3 & x1)";

#[test]
fn lattice_check_accepts_chain() {
    let out = latgap(&["lattice-check", &fixture("chain3.lat")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "valid, |L|=3, bottom=0, top=1\n");
}

#[test]
fn lattice_check_rejects_diamond_with_witness() {
    let out = latgap(&["lattice-check", &fixture("m3.lat")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("witness: (a, b, c)"), "{}", stdout(&out));

    let (v, code) = json(&["lattice-check", &fixture("m3.lat")]);
    assert_eq!(code, 1);
    assert_eq!(v["valid"], false);
    assert_eq!(v["witness"], serde_json::json!(["a", "b", "c"]));
}

#[test]
fn lattice_check_rejects_pentagon_and_cycle() {
    assert_eq!(latgap(&["lattice-check", &fixture("n5.lat")]).status.code(), Some(1));
    let out = latgap(&["lattice-check", &fixture("cycle.lat")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("cycle"));
}

#[test]
fn missing_file_is_a_user_error() {
    let out = latgap(&["lattice-check", "/nonexistent/lattice.lat"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn median_on_three_chain_is_truncated_median() {
    let (v, code) = json(&["analyze", "--lattice", "chain3", "--arity", "3", "--expr", MEDIAN, "--verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["gap"], 2);
    assert_eq!(v["ess"], 3);
    assert_eq!(v["verdict"]["kind"], "truncated-median");
    assert_eq!(v["verdict"]["a"], "0");
    assert_eq!(v["verdict"]["b"], "1");
    assert_eq!(v["oracle"]["agrees"], true);
}

#[test]
fn truncated_median_reports_constants() {
    let expr = "(a | ((x1&x2)|(x2&x3)|(x3&x1))) & b";
    let (v, code) = json(&["analyze", "--lattice", "chain4", "--arity", "3", "--expr", expr, "--verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["kind"], "truncated-median");
    assert_eq!(v["verdict"]["a"], "a");
    assert_eq!(v["verdict"]["b"], "b");
    assert_eq!(v["dnf"], "a | (b & x1 & x2) | (b & x1 & x3) | (b & x2 & x3)");
}

#[test]
fn meet_has_gap_one() {
    let (v, code) = json(&["analyze", "--lattice", "chain3", "--arity", "2", "--expr", "x1 & x2"]);
    assert_eq!(code, 0);
    assert_eq!(v["gap"], 1);
    assert_eq!(v["verdict"]["kind"], "gap1");
}

#[test]
fn single_variable_gap_is_undefined() {
    let (v, code) = json(&["analyze", "--lattice", "cube2", "--arity", "2", "--expr", "x2 | 01"]);
    assert_eq!(code, 0);
    assert_eq!(v["essential"], serde_json::json!([2]));
    assert_eq!(v["gap"], Value::Null);
    assert_eq!(v["verdict"]["kind"], "undefined");
}

#[test]
fn analyze_reads_lattice_and_expression_files() {
    let dir = tempfile::tempdir().unwrap();
    let expr = dir.path().join("f.txt");
    std::fs::write(&expr, "m | (x1 & x2)\n").unwrap();
    let out = latgap(&[
        "analyze",
        "--lattice",
        &fixture("chain3.lat"),
        "--arity",
        "2",
        "--expr-file",
        expr.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("dnf: m | (x1 & x2)"), "{text}");
    assert!(text.contains("gap: 1"), "{text}");
}

#[test]
fn analyze_rejects_bad_input() {
    for args in [
        vec!["analyze", "--lattice", "chain3", "--arity", "2", "--expr", "x3"],
        vec!["analyze", "--lattice", "chain3", "--arity", "2", "--expr", "x1 & q"],
        vec!["analyze", "--lattice", "chain3", "--arity", "2", "--expr", "(x1 & x2"],
        vec!["analyze", "--lattice", &fixture("m3.lat"), "--arity", "2", "--expr", "x1"],
        vec!["analyze", "--lattice", "chain3", "--arity", "2"],
    ] {
        let out = latgap(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn bool_forms() {
    let (v, _) = json(&["bool", "analyze", "--table", "0110", "--verify"]);
    assert_eq!(v["zhegalkin"], "x1 + x2");
    assert_eq!(v["verdict"]["kind"], "boolean-form");
    assert_eq!(v["verdict"]["form"], 1);
    assert_eq!(v["verdict"]["m"], 2);
    assert_eq!(v["oracle"]["agrees"], true);

    let (v, _) = json(&["bool", "analyze", "--table", "00010111"]);
    assert_eq!(v["verdict"]["form"], 3);
    assert_eq!(v["gap"], 2);

    let (v, _) = json(&["bool", "analyze", "--table", "0001"]);
    assert_eq!(v["gap"], 1);
    assert_eq!(v["verdict"]["kind"], "gap1");
}

#[test]
fn bool_reads_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("xor.txt");
    std::fs::write(&path, "# xor\n2 2 2\n0 1 1 0\n").unwrap();
    let out = latgap(&["bool", "analyze", "--table-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("form (1)"), "{}", stdout(&out));
}

#[test]
fn bool_rejects_bad_table() {
    assert_eq!(latgap(&["bool", "analyze", "--table", "011"]).status.code(), Some(1));
    assert_eq!(latgap(&["bool", "analyze", "--table", "01x0"]).status.code(), Some(1));
}

#[test]
fn text_and_json_verdicts_agree() {
    let cases: [&[&str]; 3] = [
        &["bool", "analyze", "--table", "0110"],
        &["bool", "analyze", "--table", "00010111"],
        &["analyze", "--lattice", "chain3", "--arity", "3", "--expr", MEDIAN],
    ];
    for args in cases {
        let text = stdout(&latgap(args));
        let (v, _) = json(args);
        let gap_line = match &v["gap"] {
            Value::Null => "gap: undefined".to_string(),
            g => format!("gap: {g}"),
        };
        assert!(text.contains(&gap_line), "{args:?}: {text}");
        let kind = v["verdict"]["kind"].as_str().unwrap();
        let expected = match kind {
            "boolean-form" => format!("form ({})", v["verdict"]["form"]),
            "truncated-median" => "truncated median".to_string(),
            "gap1" => "gap 1".to_string(),
            other => other.to_string(),
        };
        assert!(text.contains(&expected), "{args:?}: {text}");
    }
}

#[test]
fn boolean_sweep() {
    let (v, code) = json(&["verify", "boolean", "--arity", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["scanned"], 256);
    assert_eq!(v["disagreements"], 0);
    assert_eq!(v["passed"], true);
}

#[test]
fn pseudo_boolean_sweep() {
    let (v, code) = json(&["verify", "pseudo-boolean", "--arity", "2", "--codomain", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["scanned"], 81);
    assert_eq!(v["passed"], true);
}

#[test]
fn gap_theorem_sweep() {
    let out = latgap(&["verify", "gap-theorem", "--lattice", "chain4", "--arity", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("scanned: 50"), "{text}");
    assert!(text.trim_end().ends_with("PASS"), "{text}");
}

#[test]
fn sweep_budget_is_enforced() {
    let out = latgap(&["verify", "boolean", "--arity", "4", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(1));
}

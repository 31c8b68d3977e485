use std::path::PathBuf;
use std::process::Command;

use equispace_cli::{run_command, EXIT_INVALID, EXIT_OK};
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("equispace").chain(args.iter().copied());
    let code = run_command(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn solve_gap_fixture() {
    let doc = run_json(&["solve", "--instance", &fixture("gap1d.json")]);
    assert!((num(&doc["eps0"]) - 0.2).abs() <= 1e-6);
    assert!((num(&doc["v"][0]) - 0.5).abs() <= 1e-6);
    assert_eq!(doc["distances"].as_array().unwrap().len(), 2);
    assert_eq!(doc["covering"], Value::Bool(false));
    assert!(doc["iterations"].is_u64());
}

#[test]
fn reals_carry_seventeen_digits() {
    let (_, out, _) = run(&["solve", "--instance", &fixture("gap1d.json")]);
    // d(0.5, [0, 0.3]) is 0.2 in binary, printed in full
    assert!(out.contains("0.20000000000000001"), "{out}");
}

#[test]
fn helly_fixtures() {
    let neg = run_json(&["helly", "--instance", &fixture("helly1d-neg.json")]);
    assert_eq!(neg["intersects"], Value::Bool(false));
    assert_eq!(neg["counterexample"], serde_json::json!([1, 2]));
    assert!(neg.get("witness").is_none());

    let pos = run_json(&["helly", "--instance", &fixture("helly1d-pos.json")]);
    assert_eq!(pos["intersects"], Value::Bool(true));
    assert!((num(&pos["witness"][0]) - 0.5).abs() <= 1e-6);
}

#[test]
fn oracle_on_triangle_faces() {
    let doc = run_json(&["oracle", "--instance", &fixture("faces2d.json"), "--grid-depth", "256"]);
    let mesh = num(&doc["mesh"]);
    let inradius = (2.0 - 2f64.sqrt()) / 2.0;
    assert!((num(&doc["maximin"]) - inradius).abs() <= mesh);
    assert!((num(&doc["minimax"]) - inradius).abs() <= mesh);
    assert_eq!(doc["argmax"].as_array().unwrap().len(), 2);
}

#[test]
fn cover_and_boundary() {
    let sub = run_json(&["cover", "--instance", &fixture("subdivision2d.json")]);
    assert_eq!(sub["covered"], Value::Bool(true));
    assert!(sub.get("witness_uncovered").is_none());

    let faces = run_json(&["cover", "--instance", &fixture("faces2d.json")]);
    assert_eq!(faces["covered"], Value::Bool(false));
    assert_eq!(faces["witness_uncovered"].as_array().unwrap().len(), 2);

    let boundary = run_json(&["boundary", "--instance", &fixture("faces2d.json"), "--grid-depth", "32"]);
    assert_eq!(boundary["covered"], Value::Bool(true));
}

#[test]
fn t0_and_homotopy_curve() {
    let doc = run_json(&["t0", "--instance", &fixture("covers1d.json")]);
    assert!((num(&doc["t0"]) - 0.5).abs() <= 1e-4);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let summary = dir.path().join("summary.json");
    let (code, out, err) = run(&[
        "homotopy",
        "--instance",
        &fixture("covers1d.json"),
        "--t-samples",
        "8",
        "--out",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.is_empty() && err.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,eps_t,v1"));
    let mut prev = f64::INFINITY;
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 3);
        assert!((cols[1] - (0.5 - cols[0])).abs() <= 1e-5, "{line}");
        assert!(cols[1] <= prev + 2e-6);
        prev = cols[1];
    }
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert!((num(&doc["t0"]) - 0.5).abs() <= 1e-4);
    assert!(num(&doc["delta0"]) < 1e-4);
}

#[test]
fn homotopy_without_summary_path_reports_on_stderr() {
    let (code, out, err) = run(&["homotopy", "--instance", &fixture("covers1d.json"), "--t-samples", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("t,eps_t,v1\n"));
    let doc: Value = serde_json::from_str(&err).unwrap();
    assert!(doc["t0"].is_number());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let cases: Vec<Vec<String>> = vec![
        vec!["solve".into(), "--instance".into(), fixture("faces2d.json")],
        vec!["oracle".into(), "--instance".into(), fixture("faces2d.json"), "--grid-depth".into(), "64".into()],
        vec!["helly".into(), "--instance".into(), fixture("helly1d-neg.json")],
        vec!["homotopy".into(), "--instance".into(), fixture("covers1d.json"), "--t-samples".into(), "6".into()],
        vec!["cover".into(), "--instance".into(), fixture("faces2d.json"), "--grid-depth".into(), "64".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_same_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("solve.json");
    let (_, stdout_doc, _) = run(&["solve", "--instance", &fixture("gap1d.json")]);
    let (code, out, _) = run(&["solve", "--instance", &fixture("gap1d.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout_doc);
}

#[test]
fn validation_failures_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 2, "simplex": [[0,0],[1,0],[2,0]], "sets": []}"#).unwrap();
    let (code, _, err) = run(&["solve", "--instance", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("simplex"), "{err}");

    std::fs::write(&bad, "{\"dim\": 1,\n \"simplex\": [[0], [1]],\n \"sets\": [}").unwrap();
    let (code, _, err) = run(&["solve", "--instance", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("line 3"), "{err}");

    let (code, _, _) = run(&["solve", "--instance", "/nonexistent/instance.json"]);
    assert_eq!(code, EXIT_INVALID);
    let (code, _, _) = run(&["solve", "--instance", &fixture("gap1d.json"), "--tol", "-1"]);
    assert_eq!(code, EXIT_INVALID);
    let (code, _, _) = run(&["solve"]);
    assert_eq!(code, EXIT_INVALID);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, EXIT_INVALID);
    // three sets cannot form a family on a segment
    let (code, _, err) = run(&["solve", "--instance", &fixture("helly1d-pos.json")]);
    assert_eq!(code, EXIT_INVALID, "{err}");
    // the gap family does not cover, so there is no threshold
    let (code, _, err) = run(&["t0", "--instance", &fixture("gap1d.json")]);
    assert_eq!(code, EXIT_INVALID, "{err}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_equispace");
    let ok = Command::new(bin).args(["solve", "--instance", &fixture("gap1d.json")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert!((num(&doc["eps0"]) - 0.2).abs() <= 1e-6);
    let bad = Command::new(bin).args(["solve", "--instance", "/nonexistent.json"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}

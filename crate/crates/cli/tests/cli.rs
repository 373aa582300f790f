use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

use bethe_qpoly::diffop::DifferenceOperator;
use bethe_qpoly::json::operator_to_json;
use bethe_qpoly::poly::Poly;
use bethe_qpoly::ratfunc::RatFunc;
use bethe_qpoly::Field;

fn bqp(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bqp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn bqp");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn parse(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const N2: &str = r#"{"system": {"N": 2, "lambda": ["1/2", "0"], "T": [["-2", "1"]], "l": [1]},
                    "solution": {"p": [["2*Q^-2", "1"]], "roots": [["-2*Q^-2"]]}}"#;

const GOLDEN: &str = r#"{"collection": {"u": [
    {"exponent": "1", "body": [[0, 0, "1"]]},
    {"exponent": "0", "body": [[1, 1, "Q^2/(2*L)"], [0, 0, "Q^2/(Q^2-1)"]]}]}}"#;

#[test]
fn check_n2_solution() {
    let out = bqp(&["--denominator", "2", "check"], N2);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v = parse(&out);
    assert_eq!(json!({"admissible": v["admissible"], "regular": v["regular"], "generic": v["generic"]}), json!({"admissible": true, "regular": true, "generic": true}));
    assert_eq!(v["certificates"]["residuals_at_roots"], json!(["0"]));
}

#[test]
fn operator_of_golden_collection() {
    let out = bqp(&["operator"], GOLDEN);
    assert!(out.status.success());
    let f = Field::generic(1);
    let qm2 = f.q_pow(-2);
    let ratio = RatFunc::new(Poly::from_coeffs(vec![f.one(), qm2.neg_s()]), Poly::from_ints(&[1, -1])).unwrap();
    let a1 = RatFunc::constant(qm2.clone()).add(&ratio).neg();
    let a0 = ratio.scale(&qm2);
    let d = DifferenceOperator::new(vec![a0, a1, RatFunc::one()]).unwrap();
    assert_eq!(parse(&out), operator_to_json(&d, None));
}

#[test]
fn reconstruct_then_forward() {
    let out = bqp(&["--denominator", "2", "reconstruct"], N2);
    assert!(out.status.success());
    let rec = parse(&out);
    assert_eq!(rec["preframe_report"]["holds"], json!(true));
    let fwd = bqp(&["--denominator", "2", "forward"], &json!({"collection": rec["collection"], "preframe": rec["preframe"]}).to_string());
    assert!(fwd.status.success(), "{}", String::from_utf8_lossy(&fwd.stdout));
    let v = parse(&fwd);
    let f = Field::generic(2);
    let want = bethe_qpoly::json::solution_from_json(&f, &serde_json::from_str::<Value>(N2).unwrap()["solution"]).unwrap();
    assert_eq!(v["solution"]["p"], bethe_qpoly::json::solution_to_json(&want)["p"]);
    assert_eq!(v["system"]["lambda"], json!(["1/2", "0"]));
}

#[test]
fn selftest_passes() {
    let out = bqp(&["selftest", "--max-k", "4", "--seed", "0"], "");
    assert!(out.status.success());
    let v = parse(&out);
    assert_eq!(v["all_passed"], json!(true));
    assert_eq!(v["wid3"]["unique"], json!(true));
}

#[test]
fn seeds_are_reproducible() {
    let args = ["roundtrip", "--seed", "7", "--instances", "4", "--max-k", "3"];
    let a = bqp(&args, "");
    let b = bqp(&args, "");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = bqp(&["roundtrip", "--seed", "8", "--instances", "4", "--max-k", "3"], "");
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn schema_errors_are_reported() {
    let out = bqp(&["check"], r#"{"system": {"N": 2}}"#);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(parse(&out)["error"]["kind"], json!("Schema"));
    let out = bqp(&["check"], "not json");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precondition_errors_are_reported() {
    let out = bqp(&["check"], r#"{"system": {"N": 2, "lambda": ["1/2", "0"], "T": [["-2", "1"]], "l": [1]}, "solution": {"p": [["1"]]}}"#);
    assert_eq!(out.status.code(), Some(1));
    assert!(parse(&out)["error"]["kind"].is_string());
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("op.json");
    let out = bqp(&["operator", "--output", path.to_str().unwrap()], GOLDEN);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["order"], json!(2));
}

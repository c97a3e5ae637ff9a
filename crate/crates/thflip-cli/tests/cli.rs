//! End-to-end tests of the binary: fixture analysis, exit codes, JSON shape.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thflip"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn analyze_shift_reports_cokernel() {
    let a = fixture("shift_a.json");
    let b = fixture("zero_b.json");
    let out = run(&[
        "analyze",
        "--kind",
        "th",
        "--input",
        a.to_str().unwrap(),
        "--input",
        b.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["fredholm"], true);
    assert_eq!(v["dim_ker"], 0);
    assert_eq!(v["dim_coker"], 1);
    assert_eq!(v["index"], -1);
    assert_eq!(v["invertible"], false);
    assert_eq!(v["algebra"], "rational");
    assert_eq!(v["pairs"].as_array().unwrap().len(), 2);
    assert!(v["pseudoinverse"].is_string());
}

#[test]
fn analyze_pure_hankel_is_invertible() {
    let a = fixture("one_a.json");
    let b = fixture("shift_b.json");
    let out = run(&[
        "analyze",
        "--kind",
        "th",
        "--input",
        a.to_str().unwrap(),
        "--input",
        b.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["dim_ker"], 0);
    assert_eq!(v["dim_coker"], 0);
    assert_eq!(v["invertible"], true);
}

#[test]
fn analyze_non_fredholm_exits_one() {
    let dir = std::env::temp_dir().join(format!("thflip-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("circle_zero.json");
    std::fs::write(
        &path,
        r#"{ "rows": 1, "cols": 1, "entries": [[[1, 1, 0], [-1, 1, 0]]] }"#,
    )
    .unwrap();
    let b = fixture("zero_b.json");
    let out = run(&[
        "analyze",
        "--kind",
        "th",
        "--input",
        path.to_str().unwrap(),
        "--input",
        b.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["fredholm"], false);
    assert!(v["index"].is_null());
}

#[test]
fn factor_antisym_of_flip_symbol() {
    let f = fixture("flip_f.json");
    let out = run(&[
        "factor",
        "--mode",
        "antisym",
        "--input",
        f.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 2);
    assert_eq!(pairs[0]["rho"], -1);
    assert_eq!(pairs[0]["kappa"], 1);
    assert_eq!(pairs[1]["rho"], 1);
    assert!(v["verification"]["residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn factor_wh_roundtrips_through_symbol_files() {
    let f = fixture("flip_f.json");
    let out = run(&[
        "factor",
        "--mode",
        "wh",
        "--input",
        f.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verification"]["pass"], true);
    // the dumped minus factor parses back as a symbol file
    let dir = std::env::temp_dir().join(format!("thflip-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let minus_path = dir.join("minus.json");
    std::fs::write(&minus_path, serde_json::to_string(&v["minus"]).unwrap()).unwrap();
    let out2 = run(&[
        "factor",
        "--mode",
        "wh",
        "--input",
        minus_path.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out2.status.code(), Some(0), "{}", String::from_utf8_lossy(&out2.stderr));
}

#[test]
fn verify_splitting_on_shift() {
    let a = fixture("shift_a.json");
    let b = fixture("zero_b.json");
    let out = run(&[
        "verify",
        "--what",
        "splitting",
        "--kind",
        "th",
        "--input",
        a.to_str().unwrap(),
        "--input",
        b.to_str().unwrap(),
        "--sizes",
        "12,24",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["total_defect"], 1);
    assert_eq!(v["formula_defect"], 1);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_pseudoinverse_on_hankel_shift() {
    let a = fixture("one_a.json");
    let b = fixture("shift_b.json");
    let out = run(&[
        "verify",
        "--what",
        "pseudoinverse",
        "--kind",
        "th",
        "--input",
        a.to_str().unwrap(),
        "--input",
        b.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_signatures_on_flip_symbol() {
    let f = fixture("flip_f.json");
    let out = run(&[
        "verify",
        "--what",
        "signatures",
        "--input",
        f.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["counts"]["beta"], 1);
    assert_eq!(v["counts"]["gamma"], 1);
}

#[test]
fn identities_suite_passes() {
    let out = run(&["identities", "--seed", "7", "--cases", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
}

#[test]
fn missing_file_is_input_error() {
    let out = run(&[
        "analyze",
        "--kind",
        "th",
        "--input",
        "/nonexistent/a.json",
        "--input",
        "/nonexistent/b.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_symbol_is_input_error() {
    let dir = std::env::temp_dir().join(format!("thflip-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{ "rows": 2, "cols": 2, "entries": [[]] }"#).unwrap();
    let out = run(&[
        "factor",
        "--mode",
        "wh",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn analyze_mw_with_involution_file() {
    let dir = std::env::temp_dir().join(format!("thflip-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let w_path = dir.join("w_id.json");
    std::fs::write(
        &w_path,
        r#"{ "rows": 1, "cols": 1, "entries": [[[0, 1, 0]]], "role": "W" }"#,
    )
    .unwrap();
    let a = fixture("shift_a.json");
    let out = run(&[
        "analyze",
        "--kind",
        "mw",
        "--input",
        a.to_str().unwrap(),
        "--input",
        w_path.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    // M_1(t) = T(t) + H(t): one dimensional cokernel, pair (+1, 2)
    assert_eq!(v["dim_ker"], 0);
    assert_eq!(v["dim_coker"], 1);
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0]["kappa"], 2);
}

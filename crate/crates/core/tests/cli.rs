// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end runs of the `hogg-nmr` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hogg-nmr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    let v = serde_json::from_str(&stdout(&o)).expect("valid JSON report");
    (o.status.code().unwrap(), v)
}

#[test]
fn solve_all_positive_formula() {
    let o = run(&["solve", "v1 & v2 & v3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.contains("top assignment 111  probability 1.000000000000"),
        "{text}"
    );
    assert!(text.contains("verdict SAT"));
}

#[test]
fn solve_contradiction_reports_unsat() {
    let (code, v) = json(&["solve", "v1 & !v1"]);
    assert_eq!(code, 0);
    assert_eq!(v["output"]["verdict"], "UNSAT");
    assert!(v["output"]["top"]["conflicts"].as_u64().unwrap() > 0);
    assert_eq!(
        v["output"]["brute_force_solutions"]
            .as_array()
            .unwrap()
            .len(),
        0
    );
}

#[test]
fn solve_single_clause_spreads_over_four() {
    let (code, v) = json(&["solve", "!v2", "--n", "3"]);
    assert_eq!(code, 0);
    let dist = v["output"]["distribution"].as_array().unwrap();
    assert_eq!(dist.len(), 4);
    for entry in dist {
        assert!((entry["probability"].as_f64().unwrap() - 0.25).abs() < 1e-12);
        let a = entry["assignment"].as_str().unwrap();
        assert_eq!(&a[1..2], "0", "V2 is the middle bit: {a}");
    }
}

#[test]
fn bit_order_changes_rendering_only() {
    let (_, msb) = json(&["solve", "v1", "--n", "3"]);
    let (_, lsb) = json(&["--bit-order", "lsb-v1", "solve", "v1", "--n", "3"]);
    let labels = |v: &Value| -> Vec<String> {
        v["output"]["brute_force_solutions"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s.as_str().unwrap().to_string())
            .collect()
    };
    assert_eq!(labels(&msb), ["100", "101", "110", "111"]);
    assert_eq!(labels(&lsb), ["001", "011", "101", "111"]);
}

#[test]
fn parse_errors_exit_nonzero() {
    let o = run(&["solve", "v1 &"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    let o = run(&["--bit-order", "middle", "solve", "v1"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn verify_single_pairs_and_grid() {
    assert_eq!(run(&["verify", "3", "3"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "1", "1"]).status.code(), Some(0));
    let (code, v) = json(&["verify", "--all", "--max-n", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 21);
    assert!(v["metrics"]["max_error"].as_f64().unwrap() < 1e-10);
    let pairs: Vec<(u64, u64)> = v["output"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["n"].as_u64().unwrap(), r["m"].as_u64().unwrap()))
        .collect();
    let mut sorted = pairs.clone();
    sorted.sort_unstable();
    assert_eq!(pairs, sorted, "grid results keep their order");
}

#[test]
fn prep_builtin_schemes_hit_the_target() {
    let (code, v) = json(&["prep", "3"]);
    assert_eq!(code, 0);
    let exps = v["output"]["experiments"].as_array().unwrap();
    assert_eq!(exps[1]["product_operators"], "-I3z + 2I2zI3z + 4I1zI2zI3z");
    assert_eq!(v["metrics"]["residual_max_abs"], 0.0);
    let (code, v) = json(&["prep", "4"]);
    assert_eq!(code, 0);
    assert!(v["metrics"]["residual_max_abs"].as_f64().unwrap() < 1e-12);
}

#[test]
fn prep_identity_scheme_residual_is_target_minus_thermal() {
    let (code, v) = json(&["prep", "3", "--scheme", &fixture("identity_scheme.txt")]);
    assert_eq!(code, 1);
    // Thermal diagonal: Σ_k ±1/2. Target: expanding the product operators
    // gives 2^(n-1) on |000⟩ and −1/2 on every entry.
    let n = 3;
    let mut sq = 0.0;
    for s in 0u32..8 {
        let thermal = (n as f64 - 2.0 * s.count_ones() as f64) / 2.0;
        let target = if s == 0 { 4.0 - 0.5 } else { -0.5 };
        sq += (target - thermal) * (target - thermal);
    }
    let frob = v["metrics"]["residual_frobenius"].as_f64().unwrap();
    assert!((frob - sq.sqrt()).abs() < 1e-9, "{frob} vs {}", sq.sqrt());
}

#[test]
fn prep_scheme_errors_point_at_the_token() {
    let o = run(&["prep", "3", "--scheme", &fixture("bad_scheme.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 6"));
}

#[test]
fn compare_pseudo_pure_readout() {
    let path = fixture("pseudo_pure_readout.csv");
    let (code, v) = json(&["compare", &path, "--ideal", "000", "--threshold", "0.06"]);
    assert_eq!(code, 0);
    assert_eq!(v["metrics"]["max_abs_dev"], 0.0535);
    assert_eq!(v["metrics"]["argmax"], "110");
    let o = run(&["compare", &path, "--ideal", "000", "--threshold", "0.05"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn compare_all_positive_row() {
    let (code, v) = json(&[
        "compare",
        &fixture("all_positive_readout.csv"),
        "--ideal",
        "111",
        "--threshold",
        "0.09",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["metrics"]["max_abs_dev"], 0.08);
}

#[test]
fn compare_against_itself_is_zero() {
    let path = fixture("pseudo_pure_readout.csv");
    let (code, v) = json(&[
        "compare",
        &path,
        "--ideal-file",
        &path,
        "--threshold",
        "1e-12",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["metrics"]["max_abs_dev"], 0.0);
}

#[test]
fn compare_formula_ideal_follows_bit_order() {
    let path = fixture("two_negated_readout.csv");
    let (_, lsb) = json(&[
        "--bit-order",
        "lsb-v1",
        "compare",
        &path,
        "--formula",
        "!v1 & !v2 & v3",
    ]);
    assert_eq!(lsb["metrics"]["max_abs_dev"], 0.157);
    let (_, msb) = json(&["compare", &path, "--formula", "!v1 & !v2 & v3"]);
    assert_eq!(msb["metrics"]["max_abs_dev"], 1.0);
}

#[test]
fn compare_rejects_bad_lengths() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("three.csv");
    std::fs::write(&p, "1,0,0\n").unwrap();
    let o = run(&["compare", p.to_str().unwrap(), "--ideal", "00"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&p, "1,zero\n").unwrap();
    let o = run(&["compare", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pulse_verify_catalog_sequence() {
    let (code, v) = json(&["pulse", "verify", "v1 & v2 & v3", "(XY~X)1(XY~X)2(XY~X)3"]);
    assert_eq!(code, 0);
    assert_eq!(v["output"]["equivalent"], true);
    let phase = &v["output"]["msb_v1"]["on_zero_state"]["global_phase"];
    let norm = phase["re"]
        .as_f64()
        .unwrap()
        .hypot(phase["im"].as_f64().unwrap());
    assert!((norm - 1.0).abs() < 1e-9);
}

#[test]
fn pulse_verify_empty_sequence_fails() {
    let o = run(&["pulse", "verify", "v1", ""]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("no"));
}

#[test]
fn pulse_compile_and_table() {
    let o = run(&["pulse", "compile-R", "v1 & v2 & v3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Z~1 Z~2 Z~3"));
    let o = run(&["pulse", "compile-gamma", "2", "2"]);
    assert!(stdout(&o).contains("J12[-1/2J]"));
    let (code, v) = json(&["pulse", "table"]);
    assert_eq!(code, 0);
    assert_eq!(v["output"].as_array().unwrap().len(), 14);
    let (code, _) = json(&["pulse", "lower"]);
    assert_eq!(code, 0);
    let o = run(&["pulse", "reduce", "X1 X~1 Y2 Y2"]);
    assert!(stdout(&o).contains("reduced  Y2^2"));
}

#[test]
fn spectrum_uses_parameter_file() {
    let (code, v) = json(&["--params", &fixture("two_spin.toml"), "spectrum", "1"]);
    assert_eq!(code, 0);
    let freqs: Vec<f64> = v["output"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["frequency_hz"].as_f64().unwrap())
        .collect();
    assert_eq!(freqs.len(), 2);
    assert!(freqs.iter().any(|f| (f + 140.0).abs() < 1e-9));
    assert!(freqs.iter().any(|f| (f + 160.0).abs() < 1e-9));
    let (_, v) = json(&[
        "--params",
        &fixture("alanine.toml"),
        "spectrum",
        "2",
        "--state",
        "target",
    ]);
    assert_eq!(v["metrics"]["lines"], 1);
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        &["--json", "prep", "4"][..],
        &["--json", "verify", "--all", "--max-n", "4"],
        &["--json", "pulse", "table"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout);
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert!(v["tool_version"].as_str().unwrap().starts_with("hogg-nmr "));
    }
}

//! End-to-end checks of the `clusterlab` binary: worker-count independence,
//! seeded reproducibility, exit codes, and output schemas.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_clusterlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Acceptance criterion 10: identical command line + seed gives byte-identical
/// output at 1, 2, and 8 workers.
#[test]
fn criterion_10_reproducibility_across_workers() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["moments", "--n", "6", "--r", "3", "--p", "1/2"],
        vec!["exactdist", "--n", "5", "--r", "3", "--p", "1/3"],
        vec!["exactdist", "--n", "4", "--r", "3", "--p", "0.3", "--estimate", "4000", "--seed", "5"],
        vec!["simulate", "--n", "24", "--r", "3", "--p", "0.2", "--samples", "3000", "--seed", "9"],
        vec![
            "simulate", "--n", "6", "--r", "3", "--p", "1/2", "--samples", "400", "--seed", "2",
            "--with-predicates", "--format", "json",
        ],
        vec![
            "simulate", "--n", "9", "--r", "3", "--p", "0.3", "--samples", "200", "--seed", "2",
            "--with-predicates", "--predicate-samples", "400", "--format", "json",
        ],
        vec!["factors", "--n", "9", "--r", "3", "--p", "1/2", "--seed", "4"],
        vec!["shamir", "--n", "6", "--r", "3", "--seed", "7", "--runs", "500", "--stop-m", "10"],
    ];
    for case in cases {
        let mut outputs = Vec::new();
        for workers in ["1", "2", "8"] {
            let mut args = case.clone();
            args.push("--workers");
            args.push(workers);
            outputs.push(stdout_of(&args));
        }
        assert_eq!(outputs[0], outputs[1], "workers 1 vs 2 differ for {case:?}");
        assert_eq!(outputs[1], outputs[2], "workers 2 vs 8 differ for {case:?}");
        // and the repeat of the same command line is byte-identical
        let mut args = case.clone();
        args.push("--workers");
        args.push("2");
        assert_eq!(outputs[1], stdout_of(&args), "repeat differs for {case:?}");
    }
    println!("ACCEPTANCE 10 PASS: byte-identical outputs at 1, 2, 8 workers for 7 command lines");
}

#[test]
fn moments_matches_spec_values() {
    let out = stdout_of(&["moments", "--n", "5", "--r", "3", "--p", "1/2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["lambda"], "15/32");
    assert_eq!(v["mu"], "5/4");
}

#[test]
fn exactdist_tiny_records() {
    let out = stdout_of(&["exactdist", "--n", "3", "--r", "3", "--p", "1/2"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    let empty: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(empty["prob"], "7/8");
    let full: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
    assert_eq!(full["prob"], "1/8");
    assert_eq!(full["edges"], serde_json::json!([[0, 1, 2]]));
}

#[test]
fn validation_failures_exit_2() {
    let out = run(&["moments", "--n", "4", "--r", "5", "--p", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["exactdist", "--n", "9", "--r", "3", "--p", "1/2"]);
    assert_eq!(out.status.code(), Some(2), "guard violation should exit 2");
    let out = run(&["moments", "--n", "5", "--r", "3", "--p", "5/4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["moments", "--n", "5", "--r", "3", "--p", "1/2", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(2), "unknown keys are rejected");
}

#[test]
fn decimal_p_warns_about_float_mode() {
    let out = run(&["moments", "--n", "5", "--r", "3", "--p", "0.5"]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("float mode"), "expected float-mode warning, got: {stderr}");
}

#[test]
fn shamir_summary_and_trace() {
    let dir = std::env::temp_dir().join("clusterlab_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let trace_path = dir.join("trace.csv");
    let out = stdout_of(&[
        "shamir",
        "--n",
        "6",
        "--r",
        "3",
        "--seed",
        "7",
        "--runs",
        "50",
        "--trace-output",
        trace_path.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["phi0"], "10");
    assert_eq!(v["gamma_1"], "1.0000000000000001e-1");
    let trace = std::fs::read_to_string(&trace_path).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("t,phi,xi,gamma,alpha"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "1");
    assert_eq!(first[3], "1/10");
}

#[test]
fn factors_roundtrip_through_input_file() {
    let dir = std::env::temp_dir().join("clusterlab_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let input_path = dir.join("k6.txt");
    // K6 in the shared text format
    let mut text = String::from("6 0\n");
    for u in 0..6 {
        for v in u + 1..6 {
            text.push_str(&format!("{u} {v}\n"));
        }
    }
    std::fs::write(&input_path, text).unwrap();
    let out = stdout_of(&["factors", "--input", input_path.to_str().unwrap(), "--r", "3"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["factor_count"], "10");
    assert_eq!(v["matching_count"], "10");
    assert_eq!(v["factors_equal_matchings"], true);
    assert_eq!(v["clique_count"], 20);
}

#[test]
fn factors_expected_matches_sigma() {
    let out = stdout_of(&[
        "factors", "--n", "6", "--r", "3", "--p", "1/2", "--seed", "1", "--expected",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["expected_factors"], "5/32");
    assert_eq!(v["sigma_npi"], "5/32");
}

#[test]
fn verify_small_grid_exits_zero() {
    let out = run(&["verify", "--grid", "small"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("12/12 checks passed"));
    let out = run(&["verify", "--grid", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_files_equal_stdout() {
    let dir = std::env::temp_dir().join("clusterlab_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("moments.json");
    let stdout = stdout_of(&["moments", "--n", "6", "--r", "3", "--p", "2/5"]);
    let out = run(&[
        "moments", "--n", "6", "--r", "3", "--p", "2/5", "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
}

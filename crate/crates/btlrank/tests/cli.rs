//! Black-box tests of the `btlrank` binary: file round trips, formats, and
//! exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn btlrank(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btlrank"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn graph_gen_writes_valid_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = btlrank(
        &["graph", "gen", "--topology", "path", "--n", "5", "--out", "g.json"],
        dir.path(),
    );
    assert!(out.status.success());
    let g = btlrank::ComparisonGraph::read_json(dir.path().join("g.json")).unwrap();
    assert_eq!(g.n(), 5);
    assert_eq!(g.edge_count(), 4);
}

#[test]
fn simulate_fit_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    assert!(btlrank(
        &["graph", "gen", "--topology", "complete", "--n", "6", "--out", "g.json"],
        dir.path()
    )
    .status
    .success());
    assert!(btlrank(
        &[
            "simulate", "--graph", "g.json", "--L", "200", "--kappa", "2", "--seed", "3",
            "--out", "d.json"
        ],
        dir.path()
    )
    .status
    .success());

    // Auto rho is recorded: sqrt(n_max / L) = sqrt(5/200).
    let out = btlrank(&["fit", "--data", "d.json", "--rho", "auto"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rho = v["rho"].as_f64().unwrap();
    assert!((rho - (5.0f64 / 200.0).sqrt()).abs() < 1e-12);
    assert_eq!(v["theta"].as_array().unwrap().len(), 6);
    assert!(v["converged"].as_bool().unwrap());

    // Explicit rho round-trips too.
    let out = btlrank(&["fit", "--data", "d.json", "--rho", "0.5"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rho"].as_f64().unwrap(), 0.5);
}

#[test]
fn bounds_reports_all_rows() {
    let dir = tempfile::tempdir().unwrap();
    btlrank(
        &["graph", "gen", "--topology", "star", "--n", "8", "--out", "g.json"],
        dir.path(),
    );
    let out = btlrank(
        &["bounds", "--graph", "g.json", "--L", "10", "--kappa", "1.5"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("bound,value\n"));
    assert_eq!(text.lines().count(), 8); // header + 7 bounds
    assert!(text.contains("yan_linf,NA")); // leaves share no neighbors besides the hub pairings

    let out = btlrank(
        &["bounds", "--graph", "g.json", "--L", "10", "--kappa", "1.5", "--format", "json"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["values"].as_object().unwrap().len(), 7);
}

#[test]
fn experiment_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "experiment", "banded-compare", "--trials", "2", "--seed", "9", "--sweep", "20,30",
    ];
    let a = stdout(&btlrank(&args, dir.path()));
    let b = stdout(&btlrank(&args, dir.path()));
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert!(a.starts_with("n,trial,estimator,status,"));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    let out = btlrank(&["fit", "--data", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = btlrank(&["fit", "--data", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = btlrank(
        &["graph", "gen", "--topology", "banded", "--n", "5"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2)); // missing --k
}

#[test]
fn numerical_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // Item 0 never loses: the unregularized MLE does not exist.
    std::fs::write(
        dir.path().join("d.json"),
        r#"{"n":3,"L":4,"edges":[{"i":0,"j":1,"wins_i":4},{"i":1,"j":2,"wins_i":2}]}"#,
    )
    .unwrap();
    let out = btlrank(&["fit", "--data", "d.json", "--rho", "0"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    // Regularization rescues the same data.
    let out = btlrank(&["fit", "--data", "d.json", "--rho", "auto"], dir.path());
    assert!(out.status.success());
}

#[test]
fn thread_cap_env_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_btlrank"))
        .args(["experiment", "path-L-sweep", "--trials", "2", "--sweep", "100", "--n", "8"])
        .env("BTLRANK_THREADS", "1")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_btlrank"))
        .args(["experiment", "path-L-sweep", "--trials", "2", "--sweep", "100", "--n", "8"])
        .env("BTLRANK_THREADS", "zero")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

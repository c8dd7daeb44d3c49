//! End-to-end checks of the `oblearn` binary: exit-code contract,
//! validation diagnostics, and byte-stable artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oblearn"))
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("oblearn_cli_{tag}_{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const NORMAL3: &str = r#"{
  "model": {"kind": "location", "family": "normal", "params": {"sigma": 1.0}, "state_window": [1, 3]},
  "utility": {"actions": ["1", "2", "3"],
              "matrix": [[0, -1, -4], [-1, 0, -1], [-4, -1, 0]]},
  "prior": [1, 1, 1]
}"#;

const LAPLACE3: &str = r#"{
  "model": {"kind": "location", "family": "laplace", "params": {"scale": 1.0}, "state_window": [1, 3]},
  "utility": {"actions": ["a'", "a*"],
              "matrix": [[1, -1, -1], [0, 0, 0]]},
  "prior": [1, 1, 1]
}"#;

#[test]
fn check_subcommand_reports_and_exits_zero_when_audit_consistent() {
    let dir = scratch("check");
    let cfg = write_config(&dir, "normal3.json", NORMAL3);
    let out = bin()
        .args(["check", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("dub"));
    assert!(stdout.contains("implication_audit"));
    let checks: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("out/checks.json")).unwrap()).unwrap();
    let arr = checks.as_array().unwrap();
    assert!(arr.iter().any(|r| r["condition"] == "dub" && r["verdict"] == "holds"));
    assert!(arr.iter().any(|r| r["condition"] == "implication_audit"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn laplace_check_reports_dub_failure_but_consistent_audit() {
    let dir = scratch("laplace");
    let cfg = write_config(&dir, "laplace3.json", LAPLACE3);
    let out = bin()
        .args(["check", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let checks: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("out/checks.json")).unwrap()).unwrap();
    let arr = checks.as_array().unwrap();
    let dub = arr.iter().find(|r| r["condition"] == "dub").unwrap();
    assert_eq!(dub["verdict"], "fails");
    assert_eq!(dub["witnesses"]["kind_certificate"]["certificate"], "laplace_constancy");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn malformed_matrix_and_unknown_keys_exit_two() {
    let dir = scratch("bad");
    // column sums 0.9
    let bad_matrix = write_config(
        &dir,
        "bad_matrix.json",
        r#"{ "model": {"kind":"finite","states":[1,2],"signals":[0,1],
                       "matrix":[[0.5,0.4],[0.4,0.5]]} }"#,
    );
    let out = bin().args(["check", "--config"]).arg(&bad_matrix).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    let unknown_key = write_config(
        &dir,
        "unknown_key.json",
        r#"{ "model": {"kind":"location","family":"normal","state_window":[1,3]}, "extra": 1 }"#,
    );
    let out = bin().args(["check", "--config"]).arg(&unknown_key).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn simulate_is_deterministic_and_rejects_zero_horizon() {
    let dir = scratch("simulate");
    let cfg = write_config(&dir, "normal3.json", NORMAL3);

    let run = |out_dir: &Path| {
        let st = bin()
            .args(["simulate", "--config"])
            .arg(&cfg)
            .args(["--seed", "11", "--horizon", "40", "--runs", "2", "--out"])
            .arg(out_dir)
            .status()
            .unwrap();
        assert_eq!(st.code(), Some(0));
    };
    run(&dir.join("a"));
    run(&dir.join("b"));
    for i in 0..2 {
        let fa = fs::read(dir.join(format!("a/trajectory_seed{i}.csv"))).unwrap();
        let fb = fs::read(dir.join(format!("b/trajectory_seed{i}.csv"))).unwrap();
        assert_eq!(fa, fb, "seed {i} bytes differ");
        let text = String::from_utf8(fa).unwrap();
        assert!(text.starts_with("n,signal,action,belief_1,belief_2,belief_3\n"));
        assert_eq!(text.lines().count(), 41);
    }

    let out = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .args(["--horizon", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn stationary_construction_simulates_a_constant_action_column() {
    let dir = scratch("cascade");
    // the laplace threshold construction with a stationary prior:
    // D = (1, 1, −0.3) with μ = (0.375, 0.375, 0.25) sits inside the
    // ratio floor, so a' is strictly optimal after every signal
    let cfg = write_config(
        &dir,
        "stationary.json",
        r#"{
  "model": {"kind": "location", "family": "laplace", "params": {"scale": 1.0}, "state_window": [0, 2]},
  "utility": {"actions": ["a'", "a*"], "matrix": [[1, 1, -0.3], [0, 0, 0]]},
  "prior": [0.375, 0.375, 0.25]
}"#,
    );
    let st = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .args(["--seed", "3", "--horizon", "300", "--runs", "1", "--out"])
        .arg(dir.join("out"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let text = fs::read_to_string(dir.join("out/trajectory_seed0.csv")).unwrap();
    let actions: std::collections::HashSet<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(actions.len(), 1, "constant action column expected");
    assert!(actions.contains("a'"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn scan_reports_hits_for_the_nonscd_pattern() {
    let dir = scratch("scan");
    // non-SCD difference (+1, −1, +1) under normal information
    let cfg = write_config(
        &dir,
        "nonscd.json",
        r#"{
  "model": {"kind": "location", "family": "normal", "params": {"sigma": 1.0}, "state_window": [1, 3]},
  "utility": {"actions": ["a'", "a''"], "matrix": [[1, -1, 1], [0, 0, 0]]},
  "prior": [1, 1, 1]
}"#,
    );
    let out = bin()
        .args(["scan", "--config"])
        .arg(&cfg)
        .args(["--grid-step", "0.05", "--out"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "scan itself succeeds; hits are data");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("out/scan.json")).unwrap()).unwrap();
    assert!(report["total_hits"].as_u64().unwrap() > 0, "expected stationary-inadequate hits");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn experiment_listing_and_unknown_names() {
    let out = bin().arg("gallery-list").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    for id in ["g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8"] {
        assert!(stdout.contains(id), "missing {id}");
    }

    // `experiment` with no name lists the registry too
    let out = bin().arg("experiment").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("thm1_sufficiency"));

    let out = bin().args(["experiment", "not_a_scenario"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_g6_runs_quickly_and_passes() {
    let dir = scratch("g6");
    let out = bin()
        .args(["experiment", "g6", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.join("appendixB_mixture_report.json").exists());
    fs::remove_dir_all(&dir).ok();
}

//! End-to-end checks of the command-line harness: exit codes, report files,
//! and byte-identical summaries for identical configs.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kahler-lab"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kahler-lab-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn summary(dir: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(dir.join("summary.json")).expect("summary written");
    serde_json::from_str(&text).expect("summary is json")
}

#[test]
fn verify_example_passes_and_is_deterministic() {
    let d1 = tmp_dir("verify1");
    let d2 = tmp_dir("verify2");
    for d in [&d1, &d2] {
        let status = bin()
            .args([
                "--experiment",
                "verify-counterexample",
                "--n",
                "2",
                "--seed",
                "7",
            ])
            .arg("--out")
            .arg(d)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let s1 = std::fs::read(d1.join("summary.json")).unwrap();
    let s2 = std::fs::read(d2.join("summary.json")).unwrap();
    assert_eq!(
        s1, s2,
        "same config and seeds must give byte-identical summaries"
    );
    let v = summary(&d1);
    assert_eq!(v["pass"], true);
    assert!(v["isotropic_min"].as_f64().unwrap() < 0.0);
}

#[test]
fn certify_flat_is_certified_at_zero() {
    let d = tmp_dir("certify-flat");
    let status = bin()
        .args([
            "--experiment",
            "certify",
            "--model",
            "flat:2",
            "--starts",
            "16",
        ])
        .arg("--out")
        .arg(&d)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let v = summary(&d);
    assert_eq!(v["status"], "certified-nonnegative");
    assert_eq!(v["min_value"].as_f64().unwrap(), 0.0);
}

#[test]
fn certify_isotropic_violation_exits_one() {
    let d = tmp_dir("certify-iso");
    let status = bin()
        .args([
            "--experiment",
            "certify",
            "--model",
            "counterexample:2",
            "--condition",
            "isotropic",
        ])
        .arg("--out")
        .arg(&d)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let v = summary(&d);
    assert_eq!(v["status"], "violated");
    assert!(v["min_value"].as_f64().unwrap() < 0.0);
}

#[test]
fn flow_writes_trajectory_and_matches_closed_form() {
    let d = tmp_dir("flow");
    let status = bin()
        .args([
            "--experiment",
            "flow",
            "--model",
            "fs:2:2",
            "--dt",
            "1e-3",
            "--horizon",
            "0.1",
        ])
        .arg("--out")
        .arg(&d)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(d.join("trajectory.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "time,scalar,ohb_min,min_ricci_eigenvalue,tensor_norm"
    );
    assert!(lines.len() > 5);
    let v = summary(&d);
    assert!(v["closed_form_residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn decompose_reports_the_counterexample_structure() {
    let d = tmp_dir("decompose");
    let status = bin()
        .args(["--experiment", "decompose", "--model", "counterexample:2"])
        .arg("--out")
        .arg(&d)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let v = summary(&d);
    assert_eq!(v["outcome"]["kind"], "one-negative-factor");
    assert_eq!(v["block_sizes"], serde_json::json!([1, 2]));
    let tight = v["cross_bounds"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["tight"] == true);
    assert!(tight, "the -4 + 4 bound is tight");
}

#[test]
fn inequality_chain_runs_on_cone_samples() {
    let d = tmp_dir("chain");
    let status = bin()
        .args([
            "--experiment",
            "inequality-chain",
            "--n",
            "2",
            "--seed",
            "1",
            "--seed",
            "2",
            "--seed",
            "3",
        ])
        .arg("--out")
        .arg(&d)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let v = summary(&d);
    assert!(v["min_value"].as_f64().unwrap() >= -1e-8);
}

#[test]
fn variations_emit_fd_table() {
    let d = tmp_dir("variations");
    let status = bin()
        .args([
            "--experiment",
            "variations",
            "--n",
            "3",
            "--seed",
            "4",
            "--seed",
            "5",
        ])
        .arg("--out")
        .arg(&d)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(d.join("fd_table.csv")).unwrap();
    assert!(csv.lines().count() > 2 * 7, "one row per family per tensor");
    let v = summary(&d);
    assert!(v["worst_fine_residual"].as_f64().unwrap() < 1e-5);
}

#[test]
fn tensor_files_feed_experiments() {
    let d = tmp_dir("input");
    let path = d.join("tensor.json");
    kahler_core::io::save_tensor(&path, &kahler_core::models::fubini_study(2, 4.0)).unwrap();
    let status = bin()
        .args(["--experiment", "certify", "--starts", "16"])
        .arg("--input")
        .arg(&path)
        .arg("--out")
        .arg(&d)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let v = summary(&d);
    assert!((v["min_value"].as_f64().unwrap() - 2.0).abs() < 1e-6);
}

#[test]
fn usage_errors_exit_two() {
    // Unknown model string.
    let status = bin()
        .args(["--experiment", "certify", "--model", "torus:3"])
        .arg("--out")
        .arg(tmp_dir("usage1"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // Missing input entirely.
    let status = bin()
        .args(["--experiment", "certify"])
        .arg("--out")
        .arg(tmp_dir("usage2"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // Unknown flag (handled by the parser).
    let status = bin()
        .args(["--experiment", "certify", "--bogus"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // Malformed tensor file.
    let d = tmp_dir("usage3");
    let path = d.join("bad.json");
    std::fs::write(
        &path,
        "{\"schema\":\"kct-1\",\"n\":2,\"entries\":[[1,1,2,2,1.0,0.0],[2,2,1,1,0.0,0.0]]}",
    )
    .unwrap();
    let status = bin()
        .args(["--experiment", "certify"])
        .arg("--input")
        .arg(&path)
        .arg("--out")
        .arg(&d)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

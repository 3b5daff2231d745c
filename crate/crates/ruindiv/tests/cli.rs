//! End-to-end checks of the command-line binary: exit codes, artifact
//! layout and byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ruindiv")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn out_arg(dir: &Path) -> String {
    dir.to_string_lossy().into_owned()
}

#[test]
fn solve_unconstrained_reports_reference_barrier() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["solve-unconstrained", "--out", &out_arg(dir.path())]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("b0 = 0.42"), "stdout: {stdout}");
    assert!(dir.path().join("value_unconstrained.csv").exists());
}

#[test]
fn csv_reruns_are_byte_identical_and_carry_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "solve-constrained",
        "--x",
        "2,4",
        "--K",
        "0.8",
        "--out",
        &out_arg(dir.path()),
    ];
    assert!(run(&args).status.success());
    let path = dir.path().join("solve_constrained.csv");
    let first = std::fs::read(&path).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());

    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    let comment = lines.next().unwrap();
    assert!(comment.starts_with("# config-hash="));
    assert!(comment.contains("version="));
    let header = lines.next().unwrap();
    assert!(header.starts_with("x,k,status"));
    // 12 significant digits in scientific notation.
    assert!(lines.next().unwrap().contains("e0,"));
}

#[test]
fn exit_code_semantics() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = out_arg(dir.path());

    // 2: every requested instance below the do-nothing floor.
    let out = run(&["solve-constrained", "--x", "1", "--K", "0.1", "--out", &out_dir]);
    assert_eq!(out.status.code(), Some(2));

    // 64: unknown flag.
    let out = run(&["scale", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(64));

    // 65: config validation failure with a field diagnostic.
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "q = -1.0\n[model]\nkind = \"stable\"\nalpha = 1.5\n").unwrap();
    let out = run(&["scale", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    assert!(String::from_utf8(out.stderr).unwrap().contains("q"));

    // 65: simulating the stable model is deliberately unsupported.
    let out = run(&[
        "simulate",
        "--paper-example",
        "3",
        "--out",
        &out_dir,
    ]);
    assert_eq!(out.status.code(), Some(65));

    // 0 plus artifacts on a plain run.
    let out = run(&["scale", "--format", "csv,svg", "--out", &out_dir]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("scale.csv").exists());
    assert!(dir.path().join("scale.svg").exists());
}

#[test]
fn dual_preset_reports_zero_barrier_and_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "solve-unconstrained",
        "--paper-example",
        "2",
        "--out",
        &out_arg(dir.path()),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("b0 = 0.000000"));

    let out = run(&[
        "lambda-map",
        "--paper-example",
        "2",
        "--out",
        &out_arg(dir.path()),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("lambda_bar = 6.66"));
}

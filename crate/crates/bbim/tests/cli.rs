//! End-to-end checks of the `bbim` binary: artifact round-trips, exit
//! codes, and byte-identical re-runs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bbim(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbim"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn generate_solve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = bbim(
        dir.path(),
        &[
            "generate", "--problem", "maxcut-dense", "--sizes", "12", "--instances",
            "2", "--seed", "7", "--out", "inst",
        ],
    );
    assert_ok(&out);
    let manifest = fs::read_to_string(dir.path().join("inst/manifest.json")).unwrap();
    assert!(manifest.contains("maxcut_n12_i0.gset"));
    let out = bbim(
        dir.path(),
        &[
            "solve", "--instance", "inst/maxcut_n12_i0.gset", "--target-file",
            "inst/maxcut_n12_i0.gset.target", "--bb", "-0.5", "--sweeps", "256",
            "--trials", "20", "--seed", "3", "--out", "run.csv",
        ],
    );
    assert_ok(&out);
    let csv = fs::read_to_string(dir.path().join("run.csv")).unwrap();
    assert!(csv.starts_with("trial,seed,success,sweeps,samples,best_energy"));
    assert_eq!(csv.lines().count(), 21);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("best_cut="), "stdout: {stdout}");
}

#[test]
fn solve_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&bbim(
        dir.path(),
        &[
            "generate", "--problem", "3r3x-2nd", "--sizes", "8", "--instances", "1",
            "--seed", "5", "--out", "inst",
        ],
    ));
    let args = [
        "solve", "--instance", "inst/3r3x_n8_i0.xorsat", "--target-file",
        "inst/3r3x_n8_i0.xorsat.target", "--bb", "-0.5", "--sweeps", "512",
        "--trials", "25", "--seed", "11", "--out", "a.csv",
    ];
    assert_ok(&bbim(dir.path(), &args));
    let mut args2 = args;
    args2[args.len() - 1] = "b.csv";
    assert_ok(&bbim(dir.path(), &args2));
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn generate_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["x", "y"] {
        assert_ok(&bbim(
            dir.path(),
            &[
                "generate", "--problem", "3r3x-3rd", "--sizes", "8,12", "--instances",
                "2", "--seed", "9", "--out", sub,
            ],
        ));
    }
    for name in ["manifest.json", "3r3x_n8_i0.xorsat", "3r3x_n12_i1.xorsat"] {
        let x = fs::read(dir.path().join("x").join(name)).unwrap();
        let y = fs::read(dir.path().join("y").join(name)).unwrap();
        assert_eq!(x, y, "{name} differs between runs");
    }
}

#[test]
fn benchmark_rerun_is_byte_identical_and_checkpointed() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "benchmark", "--problem", "3r3x-2nd", "--sizes", "6", "--instances", "2",
        "--trials", "10", "--bb-grid", "-0.5,0", "--budgets", "64,128", "--seed",
        "21", "--out", "bench",
    ];
    assert_ok(&bbim(dir.path(), &args));
    let first = fs::read(dir.path().join("bench/success_probability.csv")).unwrap();
    let first_speedup = fs::read(dir.path().join("bench/speedup.csv")).unwrap();
    // second run resumes from the checkpoint and must reproduce the CSVs
    assert_ok(&bbim(dir.path(), &args));
    assert_eq!(first, fs::read(dir.path().join("bench/success_probability.csv")).unwrap());
    assert_eq!(first_speedup, fs::read(dir.path().join("bench/speedup.csv")).unwrap());
}

#[test]
fn oracle_outputs_and_rerun() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("demo.ising"),
        "n 3\np 0 1 1\np 0 2 1\np 1 2 1\nh 0 1\nh 2 -1\n",
    )
    .unwrap();
    let args = [
        "oracle", "--instance", "demo.ising", "--bb", "-0.5", "--beta", "1",
        "--out", "orc",
    ];
    assert_ok(&bbim(dir.path(), &args));
    let matrix = fs::read_to_string(dir.path().join("orc/transition_matrix.csv")).unwrap();
    assert_eq!(matrix.lines().count(), 8);
    let stationary = fs::read(dir.path().join("orc/stationary.csv")).unwrap();
    assert!(dir.path().join("orc/boltzmann.csv").exists());
    assert!(dir.path().join("orc/transient.csv").exists());
    assert_ok(&bbim(dir.path(), &args));
    assert_eq!(stationary, fs::read(dir.path().join("orc/stationary.csv")).unwrap());
    // the all-flip limit has no unique stationary law
    assert_ok(&bbim(
        dir.path(),
        &["oracle", "--instance", "demo.ising", "--bb", "-64", "--beta", "1",
          "--out", "orc2"],
    ));
    let degenerate = fs::read_to_string(dir.path().join("orc2/stationary.csv")).unwrap();
    assert!(degenerate.starts_with("degenerate"));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&bbim(
        dir.path(),
        &[
            "generate", "--problem", "maxcut-dense", "--sizes", "10", "--instances",
            "1", "--seed", "2", "--out", "inst",
        ],
    ));
    fs::write(dir.path().join("solver.conf"), "bb = -0.5\nseed = 77\n").unwrap();
    let with_config = [
        "solve", "--instance", "inst/maxcut_n10_i0.gset", "--sweeps", "128",
        "--trials", "10", "--config", "solver.conf", "--out", "c.csv",
    ];
    let with_flags = [
        "solve", "--instance", "inst/maxcut_n10_i0.gset", "--sweeps", "128",
        "--trials", "10", "--bb", "-0.5", "--seed", "77", "--out", "f.csv",
    ];
    assert_ok(&bbim(dir.path(), &with_config));
    assert_ok(&bbim(dir.path(), &with_flags));
    assert_eq!(
        fs::read(dir.path().join("c.csv")).unwrap(),
        fs::read(dir.path().join("f.csv")).unwrap()
    );
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = bbim(dir.path(), &["solve", "--instance", "missing.gset"]);
    assert_eq!(out.status.code(), Some(2));
    fs::write(dir.path().join("bad.gset"), "not a graph\n").unwrap();
    let out = bbim(dir.path(), &["solve", "--instance", "bad.gset"]);
    assert_eq!(out.status.code(), Some(2));
    fs::write(dir.path().join("big.ising"), "n 13\n").unwrap();
    let out = bbim(
        dir.path(),
        &["oracle", "--instance", "big.ising", "--out", "orc"],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = bbim(
        dir.path(),
        &[
            "benchmark", "--problem", "3r3x-2nd", "--sizes", "6", "--bb-grid",
            "-0.5", "--budgets", "64", "--out", "b",
        ],
    );
    assert_eq!(out.status.code(), Some(2), "bb-grid without 0 must be rejected");
}

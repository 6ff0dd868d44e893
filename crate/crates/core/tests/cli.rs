//! Command-line behavior: outputs and exit codes.

use std::process::Command;

use optoeq::harness::emit::{read_json, CSV_HEADER};
use optoeq::harness::RecordKind;

fn optoeq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_optoeq"))
}

const SMALL: &str = r#"
symbols = 20000
measurements = 2
distances_km = [0, 20]
osnr_db = [30]
receivers = ["broadband"]
[[equalizers]]
kind = "ffe"
"#;

#[test]
fn run_writes_json_records_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let out = dir.path().join("r.json");
    let status = optoeq()
        .args([
            "run",
            cfg.to_str().unwrap(),
            "--jobs",
            "2",
            "--set",
            "measurements=3",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let recs = read_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    // Two points, three measurements each, plus two summaries.
    assert_eq!(recs.len(), 8);
    assert_eq!(
        recs.iter()
            .filter(|r| r.kind == RecordKind::Summary)
            .count(),
        2
    );
    assert!(recs.iter().all(|r| r.is_ok() && r.wall_s.is_none()));
}

#[test]
fn csv_goes_to_stdout_without_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let out = optoeq()
        .args([
            "run",
            cfg.to_str().unwrap(),
            "--set",
            "distances_km=[0]",
            "--set",
            "measurements=1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER.join(","));
    assert_eq!(lines.len(), 3);
}

#[test]
fn config_errors_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "distances_km = []\n").unwrap();
    let bad = optoeq()
        .args(["run", cfg.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(bad.code(), Some(3));
    let missing = optoeq()
        .args(["run", "/nonexistent/cfg.toml"])
        .status()
        .unwrap();
    assert_eq!(missing.code(), Some(3));
    let unknown = optoeq()
        .args(["fig3a", "--set", "no_such_key=1"])
        .status()
        .unwrap();
    assert_eq!(unknown.code(), Some(3));
}

#[test]
fn failed_points_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("huge.toml");
    // A 1000-symbol training prefix cannot fit a 3000-neuron readout.
    std::fs::write(
        &cfg,
        format!("{SMALL}[[equalizers]]\nkind = \"esn\"\nn_neurons = [3000]\n"),
    )
    .unwrap();
    let out = dir.path().join("r.csv");
    let status = optoeq()
        .args([
            "run",
            cfg.to_str().unwrap(),
            "--set",
            "distances_km=[0]",
            "--set",
            "measurements=1",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("esn(3000)"));
}

#[test]
fn unwritable_output_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let status = optoeq()
        .args([
            "run",
            cfg.to_str().unwrap(),
            "--set",
            "distances_km=[0]",
            "--set",
            "measurements=1",
        ])
        .args(["--out", "/nonexistent-dir/r.csv"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let out = optoeq().arg("selftest").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 7);
}

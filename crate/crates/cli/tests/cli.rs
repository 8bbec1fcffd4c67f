//! End-to-end checks of the binary: exit codes, artifact formats, and
//! byte-level determinism.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_intertwine"))
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

const DEGENERATE_OU: &str = r#"
command = "ou-decay"
seed = 42

[ou]
b = [[1.0, 1.0], [0.0, 2.0]]
q = [[0.0, 0.0], [0.0, 1.0]]
t-max = 5.0
points = 12
"#;

#[test]
fn decay_run_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    write(&config, DEGENERATE_OU);
    let out1 = dir.path().join("out1");
    let out2 = dir.path().join("out2");
    for out in [&out1, &out2] {
        let status = bin()
            .args(["--config"])
            .arg(&config)
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let csv1 = fs::read(out1.join("ou_decay.csv")).unwrap();
    let csv2 = fs::read(out2.join("ou_decay.csv")).unwrap();
    assert_eq!(csv1, csv2, "rerun with the same seed must be byte-identical");
    let text = String::from_utf8(csv1).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,ratio,envelope,margin"));
    assert_eq!(text.lines().count(), 13); // header + 12 grid points
    // margin column stays above -1e-10 on a passing run
    for line in lines {
        let margin: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(margin >= -1e-10);
    }
}

#[test]
fn seed_flag_changes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    write(&config, DEGENERATE_OU);
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    assert_eq!(
        bin().arg("--config").arg(&config).arg("--out").arg(&out1).status().unwrap().code(),
        Some(0)
    );
    assert_eq!(
        bin()
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&out2)
            .args(["--seed", "7"])
            .status()
            .unwrap()
            .code(),
        Some(0)
    );
    let csv1 = fs::read(out1.join("ou_decay.csv")).unwrap();
    let csv2 = fs::read(out2.join("ou_decay.csv")).unwrap();
    assert_ne!(csv1, csv2);
}

#[test]
fn zero_eigenvalue_is_exit_2_with_hypothesis_message() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    write(
        &config,
        r#"
command = "ou-decay"
[ou]
b = [[0.0, 1.0], [0.0, 2.0]]
q = [[1.0, 0.0], [0.0, 1.0]]
"#,
    );
    let output = bin()
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("sigma(B)"), "diagnostic must cite the spectrum hypothesis: {err}");
}

#[test]
fn unknown_config_key_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    write(
        &config,
        r#"
command = "jacobi-bound"
mystery-key = 5
[jacobi]
gamma1 = 3.0
multiplier = 2.0
"#,
    );
    let output = bin()
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("mystery-key"), "diagnostic must name the field: {err}");
}

#[test]
fn jacobi_reference_values() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    write(
        &config,
        r#"
command = "jacobi-bound"
[jacobi]
gamma1 = 3.0
multiplier = 2.0
n-max = 10000
points = 50
"#,
    );
    let out = dir.path().join("out");
    assert_eq!(
        bin().arg("--config").arg(&config).arg("--out").arg(&out).status().unwrap().code(),
        Some(0)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("jacobi_bound_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["envelope-constant"], 4.0);
    let t0 = report["threshold-t0"].as_f64().unwrap();
    assert!((t0 - (2.25f64).ln() / 3.0).abs() < 1e-12);
    let csv = fs::read_to_string(out.join("jacobi_bound.csv")).unwrap();
    assert!(csv.starts_with("t,sup_value,envelope,margin\n"));
}

#[test]
fn selftest_runs_shipped_configs() {
    // workspace root is two levels above this crate
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .current_dir(&root)
        .args(["--config", "configs/selftest.toml"])
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("ou-decay: PASS"));
    assert!(stdout.contains("sandbox-check: PASS"));
}

#[test]
fn config_input_is_not_mutated() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    write(&config, DEGENERATE_OU);
    let before = fs::read(&config).unwrap();
    bin()
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("out"))
        .status()
        .unwrap();
    assert_eq!(fs::read(&config).unwrap(), before);
}

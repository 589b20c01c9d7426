use std::path::Path;
use std::process::{Command, Output};

fn covertnet(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covertnet"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

#[test]
fn figure_output_does_not_depend_on_workers() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(covertnet(&["fig", "4", "--workers", "1", "--seed", "7"], a.path())
        .status
        .success());
    assert!(covertnet(&["fig", "4", "--workers", "8", "--seed", "7"], b.path())
        .status
        .success());
    let csv_a = std::fs::read(a.path().join("fig4.csv")).unwrap();
    assert_eq!(csv_a, std::fs::read(b.path().join("fig4.csv")).unwrap());
    let text = String::from_utf8(csv_a).unwrap();
    assert!(text.starts_with("# covertnet v"));
    assert!(text.contains("# seed: 7"));
    assert!(std::fs::read_to_string(a.path().join("fig4.svg"))
        .unwrap()
        .contains("<svg"));
}

#[test]
fn usage_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = covertnet(&["fig", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("supported"));
    assert_eq!(covertnet(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(
        covertnet(&["selftest", "--workers", "0"], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn config_errors_name_key_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[run]\nseed = 3\n\n[awgn]\nlambda = -2.0\n").unwrap();
    let o = covertnet(&["awgn", "bound", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 5") && err.contains("lambda"), "{err}");
}

#[test]
fn configured_sweep_writes_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(
        &cfg,
        "[run]\nseed = 5\n\n[awgn]\nlambda = 0.01\n\n[sweep]\nname = \"awgn.n\"\nvalues = [1e4, 4e4]\n",
    )
    .unwrap();
    let o = covertnet(&["awgn", "bound", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("awgn-bound.csv")).unwrap();
    assert!(csv.contains("# awgn.lambda = 0.01"));
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3);
    let bits = |row: &str| row.split(',').nth(4).unwrap().parse::<f64>().unwrap();
    assert_eq!(bits(rows[2]) - bits(rows[1]), 1.0);
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = covertnet(&["selftest", "--trials", "1000"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("selftest.csv").exists());
}

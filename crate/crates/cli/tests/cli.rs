use std::fs;
use std::process::Command;

use curio_cli::output::{parse_grid_csv, SERIES_HEADER};

fn curio() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_curio"));
    cmd.env_remove("CURIO_OUT_DIR");
    cmd
}

#[test]
fn small_run_writes_all_products() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = curio()
        .args(["--trials", "3", "--steps", "400", "--snapshot-every", "50"])
        .args(["--emit-heatmap", "--emit-step-logs", "--out-dir"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let mean = parse_grid_csv(&fs::read_to_string(out.join("values_mean.csv")).unwrap()).unwrap();
    assert_eq!(mean.size(), 11);
    let series = fs::read_to_string(out.join("series.csv")).unwrap();
    let mut lines = series.lines();
    assert_eq!(lines.next(), Some(SERIES_HEADER));
    assert_eq!(lines.count(), 400 / 50 + 1);

    let pgm = fs::read_to_string(out.join("heatmap.pgm")).unwrap();
    assert!(pgm.starts_with("P2\n11 11\n255\n"));
    assert!(out.join("heatmap.txt").exists());
    for i in 0..3 {
        let log = fs::read_to_string(out.join(format!("steps/trial_{i:03}.csv"))).unwrap();
        assert_eq!(log.lines().count(), 401);
    }
    let echo: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("config_echo.json")).unwrap()).unwrap();
    assert_eq!(echo["trials"], 3);
    assert_eq!(echo["trial_seeds"].as_array().unwrap().len(), 3);
}

#[test]
fn single_trial_has_zero_std_table() {
    let dir = tempfile::tempdir().unwrap();
    let status = curio()
        .args(["--trials", "1", "--steps", "300", "--out-dir"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let std =
        parse_grid_csv(&fs::read_to_string(dir.path().join("values_std.csv")).unwrap()).unwrap();
    assert!(std.as_slice().iter().all(|&s| s == 0.0));
}

#[test]
fn default_run_peaks_at_inducing_cell() {
    let dir = tempfile::tempdir().unwrap();
    let status = curio().arg("--out-dir").arg(dir.path()).status().unwrap();
    assert!(status.success());
    let mean =
        parse_grid_csv(&fs::read_to_string(dir.path().join("values_mean.csv")).unwrap()).unwrap();
    let (argmax, _) = mean.iter().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    assert_eq!((argmax.row, argmax.col), (5, 5));
}

#[test]
fn out_dir_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = curio()
        .env("CURIO_OUT_DIR", dir.path())
        .args(["--trials", "1", "--steps", "10"])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.path().join("values_mean.csv").exists());
}

#[test]
fn validation_failure_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = curio()
        .args(["--grid-size", "10", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.contains("--grid-size"));
    assert!(!dir.path().join("values_mean.csv").exists());

    let out = curio().args(["--epsilon", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = curio().args(["--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8(out.stderr).unwrap().lines().count(), 1);
}

#[test]
fn unwritable_out_dir_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "not a directory").unwrap();
    let out = curio()
        .args(["--trials", "1", "--steps", "10", "--out-dir"])
        .arg(blocker.join("sub"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_exits_cleanly() {
    let out = curio().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("--temp-value-form"));
}

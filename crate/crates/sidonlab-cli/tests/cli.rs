//! End-to-end checks of the installed binary.

use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sidonlab"))
}

fn run_in(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = bin();
    cmd.current_dir(dir).args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn sidonlab")
}

#[test]
fn generate_with_c_zero_writes_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("set.txt");
    let res = run_in(
        dir.path(),
        &["generate", "--c", "0", "--N", "1000", "--seed", "7", "--out", out.to_str().unwrap()],
        &[],
    );
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(fs::read_to_string(&out).unwrap(), "");
}

#[test]
fn campaign_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["campaign", "--c", "0.5", "--N", "2000", "--trials", "3", "--seed", "1"];
    let first = run_in(dir.path(), &args, &[]);
    let second = run_in(dir.path(), &args, &[]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.starts_with("seed,|S|,S(N),|T|,Z(N),density3_S,density3_remainder\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn optimize_prints_the_constant_above_the_floor() {
    let dir = tempfile::tempdir().unwrap();
    let res = run_in(dir.path(), &["optimize"], &[]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    let f_star: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("F_star = "))
        .expect("F_star line")
        .parse()
        .unwrap();
    assert!(f_star >= 0.064);
}

#[test]
fn invalid_flags_name_the_offender() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = run_in(dir.path(), &["generate", "--bogus", "1"], &[]);
    assert!(!unknown.status.success());
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("--bogus"));

    let out_of_range = run_in(dir.path(), &["generate", "--c", "2"], &[]);
    assert!(!out_of_range.status.success());
    assert!(String::from_utf8_lossy(&out_of_range.stderr).contains('c'));
}

fn failed_indices(report: &Value) -> Vec<u64> {
    report["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| !r["passed"].as_bool().unwrap())
        .map(|r| r["index"].as_u64().unwrap())
        .collect()
}

#[test]
fn reproduce_writes_reports_and_signals_the_known_failure() {
    let dir = tempfile::tempdir().unwrap();
    let res = run_in(dir.path(), &["reproduce", "--out", "report.json"], &[]);
    // criterion 7 fails by design, so the exit code must be non-zero
    assert!(!res.status.success());

    let json: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["all_passed"], false);
    assert_eq!(failed_indices(&json), vec![7]);

    let text = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(text.contains("[FAIL] criterion 07"));
    assert!(text.contains("9/10 criteria passed"));
}

#[test]
fn forcing_the_integral_flips_only_criterion_one() {
    let dir = tempfile::tempdir().unwrap();
    let res = run_in(
        dir.path(),
        &["reproduce", "--out", "forced.json"],
        &[("SIDONLAB_FORCE_INTEGRAL", "11.5")],
    );
    assert!(!res.status.success());
    let json: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("forced.json")).unwrap()).unwrap();
    assert_eq!(failed_indices(&json), vec![1, 7]);
}

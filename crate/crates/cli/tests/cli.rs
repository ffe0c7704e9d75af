use std::process::{Command, Output};

fn lrdd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrdd"))
        .args(args)
        .env_remove("LRDD_OUTPUT_DIR")
        .output()
        .unwrap()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn angular_to_stdout() {
    let out = lrdd(&["angular", "--T", "2*pi", "--samples", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# lrdd "));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5);
    // theta = 0 at T = 2 pi is exactly dark
    let first: Vec<f64> = rows[0].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!(first.last().unwrap().abs() < 1e-12);
}

#[test]
fn header_round_trips() {
    let out = lrdd(&["spectrum", "--U", "0.05", "--L", "3", "--range", "-2..2", "--samples", "9"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let cfg = lrdd::output::config_from_header(&text).unwrap();
    let again = lrdd::render(&cfg).unwrap();
    assert_eq!(again.text, text);
}

#[test]
fn json_output() {
    let out = lrdd(&["kmode", "--U", "0.05", "--t", "10", "--k", "0.5..1.5:3", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["lrdd_version"].is_string());
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_2() {
    let out = lrdd(&["angular", "--T", "1", "--t", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = lrdd(&["map", "--grid", "r:0..1:3", "theta:0..7:3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = lrdd(&["run", "/nonexistent/config.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn partial_failures_exit_3() {
    // r = 0 is singular in the asymptotic model
    let out = lrdd(&["map", "--model", "asymptotic", "--T", "12", "--grid", "r:0..2:3", "theta:0..pi:3"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# failures: 3"));
    assert_eq!(data_rows(&text).len(), 9);
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lrdd"))
        .args(["angular", "--T", "3", "--samples", "4"])
        .env("LRDD_OUTPUT_DIR", dir.path().join("nested"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = std::fs::read_to_string(dir.path().join("nested/angular.csv")).unwrap();
    assert_eq!(data_rows(&written).len(), 4);
    assert!(out.stdout.is_empty());
}

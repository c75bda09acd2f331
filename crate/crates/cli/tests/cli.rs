//! Behavior tests for the `hodyn` binary: output layout, exit codes,
//! reproducibility, and the game-file round trip.

use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

fn hodyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodyn"))
        .args(args)
        .output()
        .expect("spawn hodyn")
}

fn kv(text: &str) -> HashMap<String, String> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn first_row_second_weight(profile: &str) -> f64 {
    let row = profile.split(';').next().unwrap();
    row.split(',').nth(1).unwrap().parse().unwrap()
}

#[test]
fn simulate_drives_a_dominated_action_extinct() {
    let dir = tempfile::tempdir().unwrap();
    let out = hodyn(&[
        "simulate",
        "--builtin",
        "fig1_dominance",
        "--dynamics",
        "zd",
        "--order",
        "2",
        "--t-end",
        "20",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let summary = kv(&stdout);
    assert_eq!(summary["classification"], "strict-nash");
    assert!(first_row_second_weight(&summary["end_profile"]) < 1e-6);

    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header, "t,x_0_top,x_0_bottom,x_1_left,x_1_right");
    assert_eq!(std::fs::read_to_string(dir.path().join("summary.txt")).unwrap(), stdout);
}

#[test]
fn the_center_of_matching_pennies_does_not_move() {
    let dir = tempfile::tempdir().unwrap();
    let out = hodyn(&[
        "simulate",
        "--builtin",
        "matching_pennies",
        "--dynamics",
        "zd",
        "--order",
        "1",
        "--t-end",
        "10",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary = kv(&String::from_utf8(out.stdout).unwrap());
    for row in summary["end_profile"].split(';') {
        for w in row.split(',') {
            assert_eq!(w, "0.5");
        }
    }
}

#[test]
fn levels_bias_and_fit_flags_are_honored() {
    let dir = tempfile::tempdir().unwrap();
    let out = hodyn(&[
        "simulate",
        "--builtin",
        "fig1_dominance",
        "--dynamics",
        "ld",
        "--order",
        "2",
        "--t-end",
        "15",
        "--levels",
        "--bias-level",
        "1=1,0;0,0",
        "--fit",
        "0,1",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary = kv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(summary["bias_0"], "1=1,0;0,0");
    assert!(summary.contains_key("fit_0_exponent"));

    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.contains("lvl0_0_top"));
    assert!(header.contains("lvl1_1_right"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = |dir: &Path| {
        vec![
            "simulate".to_string(),
            "--builtin".into(),
            "fig3_coordination".into(),
            "--dynamics".into(),
            "zd".into(),
            "--order".into(),
            "2".into(),
            "--t-end".into(),
            "30".into(),
            "--init".into(),
            "rest-at:0.3,0.7;0.3,0.7".into(),
            "--out-dir".into(),
            dir.to_str().unwrap().into(),
        ]
    };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = Command::new(env!("CARGO_BIN_EXE_hodyn")).args(args(a.path())).output().unwrap();
    let rb = Command::new(env!("CARGO_BIN_EXE_hodyn")).args(args(b.path())).output().unwrap();
    assert!(ra.status.success() && rb.status.success());
    assert_eq!(ra.stdout, rb.stdout);
    let csv_a = std::fs::read(a.path().join("trajectory.csv")).unwrap();
    let csv_b = std::fs::read(b.path().join("trajectory.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
}

#[test]
fn exported_builtins_reload_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = hodyn(&["list-builtins", "--export", dir.path().to_str().unwrap()]);
    assert!(out.status.success());

    for id in ["fig1_dominance", "fig2_outside_option", "fig3_coordination", "entry_deterrence", "matching_pennies"] {
        let path = dir.path().join(format!("{id}.json"));
        assert!(path.exists(), "{id} was not exported");
        let from_file = hodyn(&["eliminate", "--game", path.to_str().unwrap()]);
        let from_builtin = hodyn(&["eliminate", "--builtin", id]);
        assert!(from_file.status.success());
        let strip = |raw: &[u8]| {
            String::from_utf8(raw.to_vec())
                .unwrap()
                .lines()
                .filter(|l| !l.starts_with("game="))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(strip(&from_file.stdout), strip(&from_builtin.stdout), "{id} differs");
    }
}

#[test]
fn usage_errors_exit_with_code_2() {
    let out = hodyn(&["simulate", "--builtin", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown builtin"));

    let out = hodyn(&["verify", "no-such-recipe"]);
    assert_eq!(out.status.code(), Some(2));

    let out = hodyn(&["sweep", "--builtin", "matching_pennies", "--grid", "0x3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_failures_with_exit_code_1() {
    let out = hodyn(&["verify", "weak-dom"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict=fail"));
    assert!(text.contains("fail_0="));
}

#[test]
fn verify_accepts_an_order_filter() {
    let out = hodyn(&["verify", "dom-rate", "--order", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("n2_exponent="));
    assert!(!text.contains("n1_exponent="));
    assert!(text.contains("verdict=pass"));
}

#[test]
fn sweep_writes_one_file_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hodyn"))
        .args([
            "sweep",
            "--builtin",
            "matching_pennies",
            "--dynamics",
            "zd",
            "--order",
            "2",
            "--grid",
            "3x3",
            "--t-end",
            "5",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ])
        .env("HODYN_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    for i in 0..3 {
        for j in 0..3 {
            assert!(dir.path().join(format!("point_{i}_{j}.csv")).exists());
        }
    }
    let sweep = std::fs::read_to_string(dir.path().join("sweep.txt")).unwrap();
    assert_eq!(sweep.lines().filter(|l| l.starts_with("point_")).count(), 9);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, sweep);
}

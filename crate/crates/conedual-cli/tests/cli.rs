//! End-to-end runs of the compiled binary: output shapes, exit codes, and
//! byte-for-byte determinism across reruns.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_conedual");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {:?}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn fixture(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn path_str(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn logan_prints_bare_value() {
    let out = run(&["logan", "--t", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(out.stdout, b"3\n");
}

#[test]
fn logan_compare_reports_lp_value_and_ratio() {
    // h = 1/16, T = 1 makes both windows identical, so the optimum is 1
    let out = run(&["logan-compare", "--t", "1", "--n", "64", "--half-width", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["logan_bound"].as_f64().unwrap(), 3.0);
    assert!((v["lp_value"].as_f64().unwrap() - 1.0).abs() <= 1e-7);
    assert!(v["ratio"].as_f64().unwrap() <= 1.0);
}

#[test]
fn decompose_member_emits_parts() {
    let dir = tempfile::tempdir().unwrap();
    let rho = fixture(&dir, "rho.json", r#"{"group":[2],"values":[[2.0,0.0],[1.0,0.0]]}"#);
    let out = run(&["decompose", path_str(&rho)]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["status"], "member");
    assert!(v["residual"].as_f64().unwrap() <= 1e-9);
    for part in ["omega", "tau", "odd"] {
        assert!(v[part]["values"].is_array(), "missing {part}");
    }
}

#[test]
fn decompose_rejection_carries_separating_witness() {
    let dir = tempfile::tempdir().unwrap();
    let rho = fixture(&dir, "rho.json", r#"{"group":[2],"values":[[-1.0,0.0],[0.0,0.0]]}"#);
    let out = run(&["decompose", path_str(&rho)]);
    assert_eq!(code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["status"], "non_member");
    let w = &v["witness"]["values"];
    assert!((w[0][0].as_f64().unwrap() - 1.0).abs() <= 1e-9);
    assert!((w[1][0].as_f64().unwrap() - 1.0).abs() <= 1e-9);
    assert!((v["pairing"].as_f64().unwrap() + 1.0).abs() <= 1e-9);
}

#[test]
fn duality_closes_on_two_point_group() {
    let out = run(&[
        "extremal", "duality", "--group", "2", "--u", "0,1", "--v", "1",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["s"]["value"].as_f64().unwrap() - 0.5).abs() <= 1e-9);
    assert!((v["sigma"].as_f64().unwrap() - 0.5).abs() <= 1e-9);
    assert!((v["sigma_C"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
    assert!(v["gap"].as_f64().unwrap() <= 1e-7);
}

#[test]
fn negative_window_elements_parse_on_multi_factor_groups() {
    let out = run(&[
        "extremal", "s", "--group", "2,3", "--u", "0:0,0:1,0:-1", "--v", "1:0",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!(v["value"].as_f64().unwrap() > 0.0);
    assert!(v["gap"].as_f64().unwrap() <= 1e-7);
}

#[test]
fn reruns_are_byte_identical() {
    let args = [
        "extremal", "duality", "--group", "8", "--u", "0,1,-1", "--v", "3,-3",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);

    let selftest = ["selftest", "--seed", "3", "--cases", "4"];
    let a = run(&selftest);
    let b = run(&selftest);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["ok"], true);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn check_accepts_and_rejects_with_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let good = fixture(&dir, "good.json", r#"{"group":[2],"values":[[1.0,0.0],[1.0,0.0]]}"#);
    let out = run(&["check", "pd", path_str(&good)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["holds"], true);

    let bad = fixture(&dir, "bad.json", r#"{"group":[2],"values":[[1.0,0.0],[2.0,0.0]]}"#);
    let out = run(&["check", "pd", path_str(&bad)]);
    assert_eq!(code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["holds"], false);
    assert!((v["min_transform_re"].as_f64().unwrap() + 1.0).abs() <= 1e-9);
    assert_eq!(v["min_at"].as_i64().unwrap(), 1);
}

#[test]
fn interval_reports_half_line() {
    let dir = tempfile::tempdir().unwrap();
    let mu = fixture(&dir, "mu.json", r#"{"group":[2],"values":[[1.0,0.0],[0.0,0.0]]}"#);
    let nu = fixture(&dir, "nu.json", r#"{"group":[2],"values":[[1.0,0.0],[1.0,0.0]]}"#);
    let out = run(&["interval", path_str(&mu), path_str(&nu)]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["empty"], false);
    assert!((v["lo"].as_f64().unwrap() - 2.0).abs() <= 1e-7);
    assert!(v["hi"].is_null());
}

#[test]
fn inequality_splits_on_the_threshold_constant() {
    let dir = tempfile::tempdir().unwrap();
    let mu = fixture(&dir, "mu.json", r#"{"group":[2],"values":[[1.0,0.0],[0.0,0.0]]}"#);
    let nu = fixture(&dir, "nu.json", r#"{"group":[2],"values":[[1.0,0.0],[1.0,0.0]]}"#);
    let member = run(&["inequality", path_str(&mu), path_str(&nu), "--c", "2.5"]);
    assert_eq!(code(&member), 0);
    assert_eq!(stdout_json(&member)["status"], "member");
    let rejected = run(&["inequality", path_str(&mu), path_str(&nu), "--c", "0.5"]);
    assert_eq!(code(&rejected), 2);
    assert_eq!(stdout_json(&rejected)["status"], "non_member");
}

#[test]
fn atomic_estimates_stay_inside_their_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixture(
        &dir,
        "m.json",
        r#"{"atoms":[[0.0,1.0,0.0],[3.141592653589793,0.5,0.0]],"density":[[0,0.25,0.0]]}"#,
    );
    let mass = run(&["atomic", "mass", path_str(&m), "--n", "400", "--x0", "0"]);
    assert_eq!(code(&mass), 0);
    let v = stdout_json(&mass);
    assert!((v["stored"][0].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert!(v["error"].as_f64().unwrap() <= v["bound"].as_f64().unwrap());

    let energy = run(&["atomic", "energy", path_str(&m), "--n", "400"]);
    assert_eq!(code(&energy), 0);
    let v = stdout_json(&energy);
    assert!((v["atomic_energy"].as_f64().unwrap() - 1.25).abs() <= 1e-12);
    assert!(v["error"].as_f64().unwrap() <= v["bound"].as_f64().unwrap());
}

#[test]
fn square_root_round_trips_or_reports_obstruction() {
    let dir = tempfile::tempdir().unwrap();
    let pd = fixture(&dir, "pd.json", r#"{"group":[4],"values":[[2.0,0.0],[1.0,0.0],[0.0,0.0],[1.0,0.0]]}"#);
    let out = run(&["boas-kac", path_str(&pd)]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!(v["residual"].as_f64().unwrap() <= 1e-10);
    assert!(v["root"]["values"].is_array());

    let bad = fixture(&dir, "bad.json", r#"{"group":[2],"values":[[1.0,0.0],[2.0,0.0]]}"#);
    let out = run(&["boas-kac", path_str(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(stdout_json(&out)["error"].is_string());
}

#[test]
fn input_problems_exit_three() {
    let out = run(&["check", "pd", "/nonexistent/f.json"]);
    assert_eq!(code(&out), 3);

    let dir = tempfile::tempdir().unwrap();
    let garbled = fixture(&dir, "g.json", "{not json");
    let out = run(&["decompose", path_str(&garbled)]);
    assert_eq!(code(&out), 3);

    // length mismatch between the group order and the value list
    let short = fixture(&dir, "short.json", r#"{"group":[4],"values":[[1.0,0.0]]}"#);
    let out = run(&["check", "pd", path_str(&short)]);
    assert_eq!(code(&out), 3);

    let out = run(&["extremal", "s", "--group", "4", "--u", "0", "--v", "1:2"]);
    assert_eq!(code(&out), 3, "tuple member on a cyclic group should be rejected");
}

#[test]
fn usage_errors_and_help_use_distinct_codes() {
    let out = run(&["--definitely-not-a-flag"]);
    assert_eq!(code(&out), 3);
    let out = run(&["logan"]);
    assert_eq!(code(&out), 3, "missing required --t");
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let out = run(&["--version"]);
    assert_eq!(code(&out), 0);
}

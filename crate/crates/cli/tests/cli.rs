use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn dqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqm"))
        .args(args)
        .env_remove("DQ_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = dqm(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn frequencies(v: &Value) -> Vec<f64> {
    v["frequencies"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn weights_report_their_class() {
    let v = json(&["weights", "--grid", "uniform", "--n", "3", "--order", "1", "--format", "json"]);
    assert_eq!(v["symmetry"], "skew-centro");
    assert_eq!(v["values"][0], serde_json::json!([-3.0, 4.0, -1.0]));
    let v = json(&["weights", "--grid", "chebyshev", "--n", "8", "--order", "2", "--format", "json"]);
    assert_eq!(v["symmetry"], "centro");
    let csv = stdout(&dqm(&["weights", "--n", "3"]));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(dqm(&["weights", "--n", "1"]).status.code(), Some(2));
    assert_eq!(dqm(&["weights"]).status.code(), Some(2));
    assert_eq!(dqm(&["solve", "beam", "--n", "4"]).status.code(), Some(2));
    assert_eq!(dqm(&["error-profile", "--f", "tan", "--n", "8"]).status.code(), Some(2));
    assert_eq!(dqm(&["bench", "--sizes", "7"]).status.code(), Some(2));
}

#[test]
fn beam_and_plate_values() {
    let o = dqm(&["solve", "beam", "--grid", "uniform", "--n", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let first = text.lines().nth(1).unwrap();
    assert!(first.contains("9.8683"), "{first}");
    let v = json(&["solve", "plate", "--grid", "chebyshev", "--n", "8", "--alpha", "1.5", "--format", "json"]);
    assert!(format!("{:.4}", frequencies(&v)[0]) == "32.0761");
}

#[test]
fn reference_values_give_relative_errors() {
    let o = dqm(&["solve", "beam", "--reference", "9.8696044,39.4784176"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    let err: f64 = lines[1].rsplit(',').next().unwrap().parse().unwrap();
    assert!(err.abs() < 1e-5);
}

#[test]
fn right_angle_skew_plate_equals_clamped_plate() {
    let skew = json(&["solve", "skew-plate", "--theta", "90", "--bc", "clamped", "--n", "9", "--count", "4", "--format", "json"]);
    let rect = json(&["solve", "plate", "--bc", "clamped", "--n", "9", "--count", "4", "--format", "json"]);
    for (a, b) in frequencies(&skew).iter().zip(frequencies(&rect)) {
        assert!((a / b - 1.0).abs() < 1e-8);
    }
}

#[test]
fn dense_and_factorized_paths_match() {
    let args = |p: &'static str| ["solve", "plate", "--alpha", "1.5", "--count", "3", "--path", p, "--format", "json"];
    let d = json(&args("dense"));
    let f = json(&args("factorized"));
    assert_eq!(d["path"], "dense");
    assert_eq!(f["path"], "factorized");
    for (a, b) in frequencies(&d).iter().zip(frequencies(&f)) {
        assert!((a / b - 1.0).abs() < 1e-8);
    }
    assert!(f["multiplies"].as_u64().unwrap() < d["multiplies"].as_u64().unwrap());
}

#[test]
fn bench_is_deterministic_and_cheap() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = dqm(&["bench", "--sizes", "16,32,64", "--seed", "1", "--format", "json", "--output", p.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let (ta, tb) = (fs::read_to_string(&a).unwrap(), fs::read_to_string(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_str(&ta).unwrap();
    let row = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["op"] == "inverse" && r["class"] == "centro" && r["n"] == 64)
        .unwrap();
    assert!(row["ratio"].as_f64().unwrap() <= 0.30);
}

#[test]
fn seed_falls_back_to_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_dqm"))
        .args(["bench", "--sizes", "4", "--trials", "1", "--format", "json"])
        .env("DQ_SEED", "42")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 42);
}

#[test]
fn error_profile_peaks_at_an_end() {
    let v = json(&["error-profile", "--f", "exp", "--grid", "uniform", "--n", "8", "--format", "json"]);
    let argmax = v["argmax"].as_u64().unwrap();
    assert!(argmax == 1 || argmax == 8, "{argmax}");
    let csv = stdout(&dqm(&["error-profile", "--f", "monomial:3", "--n", "6"]));
    assert_eq!(csv.lines().next().unwrap(), "node,x,error,bound");
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn unwritable_output_exits_4() {
    let o = dqm(&["bench", "--sizes", "4", "--output", "/nonexistent-dir/report.json"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn batch_config_runs_every_case() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cases.json");
    fs::write(
        &cfg,
        r#"{"cases": [
            {"name": "beam", "problem": "beam", "grid": {"kind": "uniform", "n": 8}},
            {"name": "plate", "problem": "plate", "grid": {"kind": "uniform", "n": 8}, "alpha": 1.5},
            {"name": "flow", "problem": "conv-diff", "grid": {"kind": "uniform", "n": 6},
             "alpha": 1, "beta": 1, "sink": 0.25, "inlet": [1, 1, 1, 1, 1, 1]}
        ]}"#,
    )
    .unwrap();
    let v = json(&["solve", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    let outs = v.as_array().unwrap();
    assert_eq!(outs.len(), 3);
    assert_eq!(outs[1]["name"], "plate");
    assert!(format!("{:.4}", frequencies(&outs[1])[0]) == "32.0721");
    assert_eq!(outs[2]["output"], "field");
    assert!(outs[2]["residual"].as_f64().unwrap() < 1e-8);
    let csv = dqm(&["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(csv.status.code(), Some(2));
}

#[test]
fn structured_path_on_asymmetric_grid_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("case.json");
    fs::write(
        &cfg,
        r#"{"problem": "beam", "path": "factorized",
            "grid": {"kind": "custom", "nodes": [0, 0.1, 0.25, 0.45, 0.6, 0.8, 0.9, 1]}}"#,
    )
    .unwrap();
    assert_eq!(dqm(&["solve", "--config", cfg.to_str().unwrap()]).status.code(), Some(3));
}

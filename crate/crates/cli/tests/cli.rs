//! The binary as a user sees it: exit codes, formats, overrides.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use sdpfeas_core::{bound_sweep, BoundKind, HazardModel, SdpOutcome, SignMode, SweepOutcome, Variant};
use serde_json::{json, Value};
use tempfile::TempDir;

fn sdpfeas() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sdpfeas"));
    c.env_remove("SDPFEAS_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    sdpfeas().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn config(dir: &TempDir, v: &Value) -> String {
    write(dir, "scenario.json", &v.to_string()).to_str().unwrap().to_owned()
}

fn desk() -> Value {
    json!({
        "outcome": {"l": 100, "p": 0.05},
        "model": {"family": "constant", "lambda": 2},
        "time_grid": {"start": 1},
        "kinds": ["hazard"]
    })
}

fn strip_timestamp(mut report: Value) -> Value {
    report.as_object_mut().unwrap().remove("timestamp");
    report
}

#[test]
fn metrics_from_counts_records_and_stdin() {
    let dir = TempDir::new().unwrap();
    let counts = write(&dir, "counts.json", r#"{"tp": 7, "fn": 3, "fp": 4, "tn": 17}"#);
    let o = run(&["metrics", counts.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["p"], 0.15);
    assert_eq!(v["fraction"], "3/20");
    assert_eq!(v["predicted_clean"], 20);

    let o = run(&["metrics", "--config", counts.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let row = rdr.records().next().unwrap().unwrap();
    assert_eq!(row.iter().take(4).collect::<Vec<_>>(), ["7", "3", "4", "17"]);
    assert_eq!(row[4].parse::<f64>().unwrap(), 0.15);

    let records = write(
        &dir,
        "records.csv",
        "actual,predicted\ndefective,clean\nclean,clean\nclean,clean\ndefective,defective\n",
    );
    let v: Value = serde_json::from_str(&stdout(&run(&["metrics", records.to_str().unwrap()]))).unwrap();
    assert_eq!(v["fraction"], "1/3");

    let mut child = sdpfeas()
        .args(["metrics", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"tp":0,"fn":1,"fp":0,"tn":3}"#).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(serde_json::from_str::<Value>(&stdout(&o)).unwrap()["p"], 0.25);
}

#[test]
fn assumption_violation_exits_two() {
    let dir = TempDir::new().unwrap();
    let counts = write(&dir, "counts.json", r#"{"tp": 7, "fn": 0, "fp": 4, "tn": 17}"#);
    let o = run(&["metrics", counts.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("at least one false negative"), "{}", stderr(&o));

    let mut cfg = desk();
    cfg["outcome"] = json!({"l": 100, "confusion": {"tp": 7, "fn": 3, "fp": 4, "tn": 0}});
    assert_eq!(code(&run(&["bound", "--config", &config(&dir, &cfg)])), 2);
}

#[test]
fn usage_and_io_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["sweep", "--config", "/nonexistent/scenario.json"])), 1);
    let cfg = config(&dir, &desk());
    assert_eq!(code(&run(&["bound", "--config", &cfg, "--corrected", "--as-published"])), 1);
    assert_eq!(code(&run(&["bound", "--config", &cfg, "--epsilon", "1.5"])), 1);
    assert_eq!(code(&run(&["bound", "--config", &cfg, "--format", "xml"])), 1);

    let mut bad = desk();
    bad["time_grid"] = json!({"start": 1, "stop": 1, "steps": 5, "spacing": "log"});
    assert_eq!(code(&run(&["sweep", "--config", &config(&dir, &bad)])), 1);
    bad["time_grid"] = json!({"start": 1});
    bad["surprise"] = json!(true);
    assert_eq!(code(&run(&["sweep", "--config", &config(&dir, &bad)])), 1);

    let o = run(&["bound", "--config", &cfg, "--out", "/nonexistent/dir/out.json"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).starts_with("sdpfeas: "));
}

#[test]
fn bound_json_csv_and_out_of_regime() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, &desk());
    let o = run(&["bound", "--config", &cfg]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["bound"].as_f64().unwrap() / (-0.9f64).exp() - 1.0).abs() < 1e-15);
    assert_eq!(v["regime"], "valid");

    let out = dir.path().join("b.csv");
    let o = run(&["bound", "--config", &cfg, "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["t", "theorem", "mu", "threshold", "delta", "bound", "regime"]);
    let row = rdr.records().next().unwrap().unwrap();
    assert_eq!(row[5].parse::<f64>().unwrap(), v["bound"].as_f64().unwrap());

    let mut far = desk();
    far["model"] = json!({"family": "li", "K": 1});
    far["time_grid"] = json!({"start": 6});
    let o = run(&["bound", "--config", &config(&dir, &far)]);
    assert_eq!(code(&o), 3);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["regime"], "out-of-regime");
    assert!(v.get("bound").is_none());

    // a sweep through the same point reports it but is not itself a failure
    far["time_grid"] = json!({"start": 1, "stop": 8, "steps": 8});
    let o = run(&["sweep", "--config", &config(&dir, &far)]);
    assert_eq!(code(&o), 0);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let regimes: Vec<String> = rdr.records().map(|r| r.unwrap()[6].to_string()).collect();
    assert_eq!(regimes.iter().filter(|r| *r == "out-of-regime").count(), 4);
}

#[test]
fn injected_outcome_and_sign_mode() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({
        "outcome": {"l": 200, "p": 0.1, "injection": {"K_hat": 0.5, "m_hat": 0}},
        "model": {"family": "weibull", "K": 1, "m": 0},
        "time_grid": {"start": 0.5},
        "kinds": ["reliability"]
    });
    let path = config(&dir, &cfg);
    let corrected: Value = serde_json::from_str(&stdout(&run(&["bound", "--config", &path]))).unwrap();
    let o = run(&["bound", "--config", &path, "--as-published"]);
    let published: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(corrected["sign_mode"], "corrected");
    assert_eq!(published["sign_mode"], "as-published");
    assert!(corrected["mu"].as_f64().unwrap() < 1.0);
    assert!(published["mu"].as_f64().unwrap() > 1.0);

    let o = run(&["verify", "--config", &path, "--as-published"]);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["settings"]["sign_mode"], "as-published");
    assert_eq!(report["outcome"]["variant"], "Y");
}

#[test]
fn sweep_csv_round_trips_bit_for_bit() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({
        "outcome": {"l": 1000, "p": 0.0371},
        "model": {"family": "weibull", "K": 0.7, "m": 0.6},
        "time_grid": {"start": 0.01, "stop": 40, "steps": 37, "spacing": "log"},
        "kinds": ["hazard"]
    });
    let o = run(&["sweep", "--config", &config(&dir, &cfg)]);
    assert_eq!(code(&o), 0);

    let grid: Vec<f64> = csv::Reader::from_reader(o.stdout.as_slice())
        .records()
        .map(|r| r.unwrap()[0].parse().unwrap())
        .collect();
    let outcome = SdpOutcome::from_parts(1000, 0.0371).unwrap();
    let model = HazardModel::weibull(0.7, 0.6).unwrap();
    let expected =
        bound_sweep(&outcome, &model, &grid, BoundKind::Hazard, Variant::X, SignMode::Corrected).unwrap();

    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let mut n = 0;
    for (record, point) in rdr.records().zip(&expected) {
        let record = record.unwrap();
        let f = |i: usize| record[i].parse::<f64>().unwrap().to_bits();
        match &point.outcome {
            SweepOutcome::Bound(b) => {
                assert_eq!([f(2), f(3), f(4), f(5)], [b.mu, b.threshold, b.delta, b.bound].map(f64::to_bits));
            }
            SweepOutcome::OutOfRegime(m) => {
                assert_eq!([f(2), f(3), f(4)], [m.mu, m.threshold, m.delta].map(f64::to_bits));
                assert!(record[5].is_empty());
            }
        }
        n += 1;
    }
    assert_eq!(n, 37);
    assert_eq!(grid.first(), Some(&0.01));
    assert_eq!(grid.last(), Some(&40.0));
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, &desk());
    let o = run(&["verify", "--config", &cfg, "--trials", "20000", "--seed", "3", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let methods: Vec<String> = rdr.records().map(|r| r.unwrap()[3].to_string()).collect();
    assert_eq!(methods, ["exact", "monte-carlo"]);

    let o = run(&["verify", "--config", &cfg, "--corrupt-bound-factor", "1e-6"]);
    assert_eq!(code(&o), 4);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["summary"]["verification"]["all_hold"], false);
    assert_eq!(report["verification"][0]["holds"], false);

    let mut off = desk();
    off["verify"] = json!({"exact": false, "mc_trials": 0});
    assert_eq!(code(&run(&["verify", "--config", &config(&dir, &off)])), 1);
}

#[test]
fn seed_flag_beats_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, &desk());
    let seed_of = |o: Output| -> u64 {
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["settings"]["seed"].as_u64().unwrap()
    };
    let base = ["verify", "--config", cfg.as_str(), "--trials", "1000"];
    assert_eq!(seed_of(sdpfeas().args(base).output().unwrap()), 0);
    assert_eq!(seed_of(sdpfeas().args(base).env("SDPFEAS_SEED", "11").output().unwrap()), 11);
    let o = sdpfeas().args(base).args(["--seed", "5"]).env("SDPFEAS_SEED", "11").output().unwrap();
    assert_eq!(seed_of(o), 5);
}

#[test]
fn reports_are_reproducible_apart_from_the_timestamp() {
    let dir = TempDir::new().unwrap();
    let mut cfg = desk();
    cfg["kinds"] = json!(["hazard", "reliability"]);
    cfg["time_grid"] = json!({"start": 0.1, "stop": 2, "steps": 6, "spacing": "log"});
    cfg["verify"] = json!({"exact": true, "mc_trials": 5000, "seed": 42});
    let path = config(&dir, &cfg);
    let once = |threads: &str| -> Value {
        let o = sdpfeas().args(["verify", "--config", &path]).env("RAYON_NUM_THREADS", threads).output().unwrap();
        serde_json::from_str(&stdout(&o)).unwrap()
    };
    let a = once("1");
    let b = once("4");
    assert!(a["timestamp"].is_string());
    assert_eq!(strip_timestamp(a), strip_timestamp(b));
}

#[test]
fn fifty_point_sweep_verifies_every_point() {
    let dir = TempDir::new().unwrap();
    let mut cfg = desk();
    cfg["outcome"] = json!({"l": 500, "p": 0.08});
    cfg["time_grid"] = json!({"start": 0.5, "stop": 30, "steps": 50, "spacing": "log"});
    let o = run(&["verify", "--config", &config(&dir, &cfg)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 50);
    assert_eq!(report["verification"].as_array().unwrap().len(), 50);
    assert_eq!(report["summary"]["verification"]["checked"], 50);
}

#[test]
fn records_path_is_relative_to_the_config() {
    let dir = TempDir::new().unwrap();
    std::fs::create_dir(dir.path().join("data")).unwrap();
    write(&dir, "data/r.csv", "actual,predicted\ndefective,clean\nclean,clean\n");
    let mut cfg = desk();
    cfg["outcome"] = json!({"l": 100, "records": "data/r.csv"});
    let path = config(&dir, &cfg);
    let o = sdpfeas().current_dir(Path::new("/")).args(["bound", "--config", &path]).output().unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(serde_json::from_str::<Value>(&stdout(&o)).unwrap()["mu"], 50.0);
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn svecm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_svecm"))
        .args(args)
        .env_remove("SVECM_THREADS")
        .output()
        .expect("binary runs")
}

fn two_variable_spec() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/two_variable.json")
}

fn error_record(out: &Output) -> serde_json::Value {
    let stderr = String::from_utf8_lossy(&out.stderr);
    let last = stderr.lines().last().expect("stderr has an error record");
    serde_json::from_str(last).expect("error record is JSON")
}

const TINY_MC: &str = r#"{
  "mc": { "T_list": [100, 200], "lags_report": [0, 4], "replications": 6, "horizon": 10 }
}"#;

#[test]
fn granger_beta_is_proportional_to_known_vector() {
    let dir = tempfile::tempdir().unwrap();
    let spec = two_variable_spec();
    let out = svecm(&["granger", "--spec", spec.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("granger.json")).unwrap()).unwrap();
    let beta: Vec<f64> = doc["beta"].as_array().unwrap().iter().map(|row| row[0].as_f64().unwrap()).collect();
    // (0.5, -1.5) up to scale: cross product vanishes
    assert!((beta[0] * -1.5 - beta[1] * 0.5).abs() < 1e-12, "beta = {beta:?}");
    assert!((beta[0].hypot(beta[1]) - 1.0).abs() < 1e-12);
    for key in ["A", "A_star", "alpha", "beta", "h", "C0"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn mc_writes_both_tables_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, TINY_MC).unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for (out, threads) in [(&out_a, "1"), (&out_b, "3")] {
        let o = svecm(&["mc", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", threads]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let csv = fs::read_to_string(out_a.join("table1.csv")).unwrap();
    assert!(csv.starts_with("T,lag,estimator,rmse,n_reps,n_failures\n"));
    // 2 sample sizes x 2 lags x 3 estimators
    assert_eq!(csv.lines().count(), 1 + 12);
    assert!(out_a.join("table1.md").exists());
    for name in ["table1.csv", "table1.md"] {
        assert_eq!(fs::read(out_a.join(name)).unwrap(), fs::read(out_b.join(name)).unwrap(), "{name}");
    }
    let first = fs::read(out_a.join("table1.csv")).unwrap();
    let o = svecm(&["mc", "--config", cfg.to_str().unwrap(), "--out", out_a.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read(out_a.join("table1.csv")).unwrap(), first);
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, TINY_MC).unwrap();
    let o = svecm(&["mc", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--T", "150", "--reps", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("table1.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.starts_with("150,") && r.ends_with(",3,0")), "{csv}");
}

#[test]
fn unknown_config_key_lists_valid_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{ "sead": 3 }"#).unwrap();
    let o = svecm(&["mc", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    let rec = error_record(&o);
    assert_eq!(rec["error"]["kind"], "invalid_config");
    let msg = rec["error"]["message"].as_str().unwrap();
    assert!(msg.contains("sead") && msg.contains("`seed`") && msg.contains("`mc`"), "{msg}");

    fs::write(&cfg, r#"{ "mc": { "replication": 3 } }"#).unwrap();
    let rec = error_record(&svecm(&["mc", "--config", cfg.to_str().unwrap()]));
    assert!(rec["error"]["message"].as_str().unwrap().contains("`replications`"));
}

#[test]
fn failures_emit_a_json_record() {
    let o = svecm(&["granger", "--spec", "/nonexistent/spec.json"]);
    assert!(!o.status.success());
    assert_eq!(error_record(&o)["error"]["kind"], "invalid_config");

    let o = svecm(&["simulate", "--no-such-flag"]);
    assert!(!o.status.success());
    assert_eq!(error_record(&o)["error"]["kind"], "usage");
}

#[test]
fn simulate_and_decompositions_write_documented_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(svecm(&["simulate", "--T", "20", "--seed", "7", "--out", out]).status.success());
    let first = fs::read_to_string(dir.path().join("path.csv")).unwrap();
    assert!(first.starts_with("t,F1,F2,F3,F4,u1,u2,u3\n"));
    assert_eq!(first.lines().count(), 21);
    assert!(svecm(&["simulate", "--T", "20", "--seed", "7", "--out", out]).status.success());
    assert_eq!(fs::read_to_string(dir.path().join("path.csv")).unwrap(), first);

    let spec = two_variable_spec();
    assert!(svecm(&["ptdecomp", "--spec", spec.to_str().unwrap(), "--out", out]).status.success());
    let pt: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("ptdecomp.json")).unwrap()).unwrap();
    for key in ["G1", "G2", "xi"] {
        assert!(pt.get(key).is_some(), "missing {key}");
    }

    assert!(svecm(&["irf", "--spec", spec.to_str().unwrap(), "--out", out]).status.success());
    let irf = fs::read_to_string(dir.path().join("irf_theoretical.csv")).unwrap();
    assert!(irf.starts_with("lag,response_1_shock_1,response_2_shock_1\n"));
    // C(L) = [1 + 0.5L; 1 - 0.5L]: level responses settle at C(1) = (1.5, 0.5)
    let last: Vec<f64> = irf.lines().last().unwrap().split(',').skip(1).map(|v| v.parse().unwrap()).collect();
    assert!((last[0] - 1.5).abs() < 1e-12 && (last[1] - 0.5).abs() < 1e-12, "{last:?}");

    let o = svecm(&["irf", "--source", "LVAR", "--T", "300", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("irf_LVAR.csv").exists());
}

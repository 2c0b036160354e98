use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polyerg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn polyerg(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_polyerg"));
    cmd.args(args).env_remove("POLYERG_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn check_envelope(v: &Value, command: &str) {
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], command);
    assert_eq!(v["provenance"]["tool"], "polyerg");
    assert_eq!(v["provenance"]["version"], env!("CARGO_PKG_VERSION"));
    let hash: String = Sha256::digest(serde_json::to_vec(&v["config"]).unwrap())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    assert_eq!(v["provenance"]["config_sha256"], hash.as_str());
    assert!(v["provenance"].get("wall_time_s").is_none());
}

#[test]
fn verify_limit_is_reproducible() {
    let cfg = config("rotation_cubic.toml");
    let csv = scratch("rotation.csv");
    let out_path = scratch("rotation.json");
    let a = polyerg(&["verify-limit", "--config", &cfg, "--csv", csv.to_str().unwrap()], &[]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = polyerg(&["verify-limit", "--config", &cfg, "--out", out_path.to_str().unwrap()], &[]);
    assert_eq!(b.status.code(), Some(0));
    assert!(b.stdout.is_empty());
    assert_eq!(std::fs::read(&out_path).unwrap(), a.stdout);
    let v = json(&a);
    check_envelope(&v, "verify-limit");
    assert_eq!(v["config"]["seed"], 24301);

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n_or_N,empirical_re,empirical_im,analytic_re,analytic_im,abs_error"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), [1e3, 1e4, 1e5, 1e6]);
    for r in &rows {
        let err = ((r[1] - r[3]).powi(2) + (r[2] - r[4]).powi(2)).sqrt();
        assert!((err - r[5]).abs() <= 1e-10 * err.max(1e-300) + 1e-15);
    }
    assert!(rows.last().unwrap()[5] <= 0.02);
}

#[test]
fn timing_is_opt_in() {
    let out = polyerg(&["--timing", "classify", "n", "n^2", "n^3"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["provenance"]["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn failed_verification_still_reports() {
    let src = std::fs::read_to_string(configs().join("rotation_cubic.toml")).unwrap();
    let tight = scratch("tight.toml");
    std::fs::write(&tight, src.replace("tolerance = 0.02", "tolerance = 1e-12")).unwrap();
    let out = polyerg(&["verify-limit", "--config", tight.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(3));
    check_envelope(&json(&out), "verify-limit");
    assert!(String::from_utf8_lossy(&out.stderr).contains("verification failed"));
}

#[test]
fn usage_errors_exit_two() {
    let bad = scratch("unknown.toml");
    std::fs::write(&bad, "[map]\ndimension = 1\ntranslation = [\"sqrt2\"]\ncolour = 3\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["verify-limit", "--config", bad.to_str().unwrap()],
        vec!["verify-limit", "--config", "/nonexistent/polyerg.toml"],
        vec!["classify", "n"],
        vec!["classify", "n", "n^2", "n^2"],
        vec!["congruence", "n^2+"],
        vec!["extremal", "--equation", "1,1,-1", "--N", "10"],
        vec!["counterexample", "--construction", "iii"],
        vec!["unknown-command"],
    ];
    for args in cases {
        let out = polyerg(&args, &[]);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let cfg = config("rotation_cubic.toml");
    let out = polyerg(&["simulate", "--config", &cfg], &[("POLYERG_SEED", "twelve")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_override_is_echoed() {
    let cfg = config("rotation_cubic.toml");
    let a = polyerg(&["simulate", "--config", &cfg], &[("POLYERG_SEED", "7")]);
    assert_eq!(a.status.code(), Some(0));
    let va = json(&a);
    assert_eq!(va["config"]["seed"], 7);
    let b = json(&polyerg(&["simulate", "--config", &cfg], &[]));
    assert_ne!(va["provenance"]["config_sha256"], b["provenance"]["config_sha256"]);
}

#[test]
fn shipped_configs_pass() {
    for (cmd, name) in [
        ("verify-limit", "skew_quadratic.toml"),
        ("restricted", "restricted_interval.toml"),
        ("weighted", "weighted_window.toml"),
    ] {
        let out = polyerg(&[cmd, "--config", &config(name)], &[]);
        assert_eq!(out.status.code(), Some(0), "{cmd} {name}: {}", String::from_utf8_lossy(&out.stderr));
        check_envelope(&json(&out), cmd);
    }
}

#[test]
fn gallery_passes() {
    let out = polyerg(&["gallery"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.len() >= 10);
    assert!(rows.iter().all(|r| r["pass"] == true), "{rows:?}");
}

#[test]
fn exact_reports_are_labelled() {
    for args in [
        &["classify", "n", "2n", "3n"][..],
        &["congruence", "(n^3-19)*(n^2+n+1)"],
        &["extremal", "--equation", "1,1,-2", "--N", "20"],
    ] {
        let out = polyerg(args, &[]);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let v = json(&out);
        check_envelope(&v, args[0]);
        assert_eq!(v["numeric_provenance"], "exact", "{args:?}");
    }
}

#[test]
fn counterexample_chains_hold() {
    for c in ["i", "ii"] {
        let out = polyerg(&["counterexample", "--construction", c, "--n-max", "30"], &[]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert_eq!(v["bound_satisfied"], true);
        let bound = v["bound"]["value"].as_f64().unwrap();
        let rows = v["per_n_correlations"].as_array().unwrap();
        assert_eq!(rows.len(), 30);
        assert!(rows.iter().all(|r| r["correlation"]["value"].as_f64().unwrap() <= bound + 1e-12));
    }
}

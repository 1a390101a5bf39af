mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use common::kauffman;
use qsl2::coalgebra::{gamma_table, GammaTable};
use qsl2::RatFunc;

fn qsl2(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsl2"))
        .args(args)
        .env_remove("QSL2_MODE")
        .env_remove("QSL2_T0")
        .env_remove("QSL2_CAP")
        .env_remove("QSL2_FORMAT")
        .env("QSL2_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn validate_reports_checks_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsl2(dir.path(), &["--format", "json", "validate", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], Value::Bool(true));
    assert!(v["checks"]["checks"].as_array().unwrap().len() >= 8);
}

#[test]
fn trefoil_invariant_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsl2(
        dir.path(),
        &["--format", "json", "invariant", "--braid", "1 1 1", "--strands", "2", "--color", "1"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let normalized: RatFunc = serde_json::from_value(v["result"]["normalized"].clone()).unwrap();
    let expected = common::oracle_as_ratfunc(&kauffman::jones_in_a(&kauffman::TREFOIL_RIGHT));
    assert_eq!(normalized, expected);

    // the mirror, with a word that starts with a minus sign
    let out = qsl2(
        dir.path(),
        &["--format", "json", "invariant", "--braid", "-1 -1 -1", "--strands", "2", "--color", "1"],
    );
    assert_eq!(out.status.code(), Some(0));
    let at_t0 = json(&out)["normalized_at_t0"][0].as_f64().unwrap();
    let t: f64 = 1.3;
    let expected = t.powi(4) + t.powi(12) - t.powi(16);
    assert!((at_t0 - expected).abs() < 1e-9 * expected.abs());
}

#[test]
fn gamma_is_cached_canonically() {
    let dir = tempfile::tempdir().unwrap();
    let first = qsl2(dir.path(), &["--format", "json", "gamma", "--m", "1", "--n", "1"]);
    assert_eq!(first.status.code(), Some(0));
    let path = dir.path().join("gamma_m1_n1_exact.json");
    let on_disk = std::fs::read_to_string(&path).unwrap();
    let table: GammaTable<RatFunc> = serde_json::from_str(&on_disk).unwrap();
    assert_eq!(table, gamma_table::<RatFunc>(1, 1).unwrap());

    let second = qsl2(dir.path(), &["--format", "json", "gamma", "--m", "1", "--n", "1"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), on_disk);
}

#[test]
fn corrupted_cache_is_recomputed_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("gamma_m1_n1_exact.json"), "{not json").unwrap();
    let out = qsl2(dir.path(), &["--format", "json", "gamma", "--m", "1", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let table: GammaTable<RatFunc> = serde_json::from_value(json(&out)).unwrap();
    assert_eq!(table, gamma_table::<RatFunc>(1, 1).unwrap());
}

#[test]
fn csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsl2(dir.path(), &["--format", "csv", "twist", "--max-m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("m,theta"));
    assert_eq!(text.lines().count(), 4);
    // csv is only defined for tables
    let out = qsl2(dir.path(), &["--format", "csv", "validate", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let literal = qsl2(dir.path(), &["ybe", "--levels", "1,1,1", "--paper-literal-r"]);
    assert_eq!(literal.status.code(), Some(1));
    let standard = qsl2(dir.path(), &["ybe", "--levels", "1,1,1"]);
    assert_eq!(standard.status.code(), Some(0));
    let short = qsl2(dir.path(), &["ybe", "--levels", "1,1"]);
    assert_eq!(short.status.code(), Some(2));
    let bad_braid = qsl2(dir.path(), &["invariant", "--braid", "3", "--strands", "2", "--color", "1"]);
    assert_eq!(bad_braid.status.code(), Some(2));
    let bad_index = qsl2(dir.path(), &["delta", "--q", "1", "--a", "2", "--b", "0"]);
    assert_eq!(bad_index.status.code(), Some(2));
    let bad_t0 = qsl2(dir.path(), &["--mode", "numeric", "--t0", "1", "validate", "--m", "2"]);
    assert_eq!(bad_t0.status.code(), Some(2));
}

#[test]
fn environment_fallbacks_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let run = |envs: &[(&str, &str)], args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_qsl2"));
        cmd.args(args).env("QSL2_CACHE_DIR", dir.path()).env_remove("QSL2_FORMAT");
        for (k, v) in envs {
            cmd.env(k, v);
        }
        cmd.output().unwrap()
    };
    let out = run(&[("QSL2_CAP", "2")], &["--format", "json", "theta", "--mono", "k=1,n=0,p=0"]);
    assert_eq!(json(&out)["cap"], Value::from(2));
    let out = run(&[("QSL2_CAP", "2")], &["--format", "json", "--cap", "3", "theta", "--mono", "k=1,n=0,p=0"]);
    assert_eq!(json(&out)["cap"], Value::from(3));
    let out = run(&[("QSL2_MODE", "numeric"), ("QSL2_T0", "1.3")], &["--format", "json", "twist", "--max-m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let theta1 = json(&out)["thetas"]["1"].clone();
    let re = theta1[0].as_f64().unwrap();
    assert!((re - 1.3f64.powi(-3)).abs() < 1e-9);
}

#[test]
fn check_all_small() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsl2(dir.path(), &["--format", "json", "check-all", "--max-level", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], Value::Bool(true));
}

#[test]
fn rank_from_a_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("family.json");
    std::fs::write(&spec, r#"["k=0,n=0,p=0", "k=1,n=0,p=0", {"kexp": 0, "n": 1, "p": 1}]"#).unwrap();
    let out = qsl2(dir.path(), &["--format", "json", "pbw-rank", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["rank"], Value::from(3));
    assert_eq!(v["full_rank"], Value::Bool(true));
}

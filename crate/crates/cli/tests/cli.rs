use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fukaya(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fukaya")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = fukaya(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("fukaya-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn hf_of_section_and_fibre() {
    let (code, v) = json(&["hf", "--l1", "1,0,0", "--l2", "0,1,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "fukaya-report/1");
    assert_eq!(v["result"]["ranks"], serde_json::json!({ "1": 1 }));
    assert_eq!(v["result"]["total"], 1);
}

#[test]
fn tate_series_a4() {
    let (code, v) = json(&["tate-series", "--name", "a4", "--order", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["coefficients"], serde_json::json!(["-5", "-45", "-140", "-365"]));
}

#[test]
fn master_consistency_run() {
    let (code, v) = json(&["check-ainfty", "--max-twist", "4", "--T", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["residual_count"], 0);
    assert_eq!(v["result"]["residuals"], serde_json::json!([]));
    assert_eq!(v["passed"], true);
}

#[test]
fn usage_errors_exit_three() {
    for args in [
        vec!["hf", "--l1", "1,0", "--l2", "0,1,0"],
        vec!["hf", "--l1", "2,4,0", "--l2", "0,1,0"],
        vec!["--D", "7", "tate-series", "--name", "a4", "--order", "2"],
        vec!["--T", "-1", "tate-series", "--name", "a4", "--order", "2"],
        vec!["--max-twist", "1", "dictionary"],
        vec!["tate-series", "--name", "b7", "--order", "2"],
        vec!["no-such-command"],
    ] {
        let out = fukaya(&args);
        assert_eq!(out.status.code(), Some(3), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn precision_errors_exit_two_with_a_suggestion() {
    let out = fukaya(&["massey", "--T", "1/8"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--T 1/4"), "{err}");
}

#[test]
fn failed_checks_exit_one() {
    let (code, v) = json(&["hh", "--expect", "9,9,9"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
}

#[test]
fn output_is_deterministic() {
    for format in ["json", "tsv", "pretty"] {
        let args = ["mu", "--max-twist", "2", "--arity", "2,3", "--format", format];
        let a = fukaya(&args);
        let b = fukaya(&args);
        assert_eq!(a.status.code(), Some(0));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn flags_override_the_config_file() {
    let cfg = temp_file("override.cfg", "# run settings\narea = 2\nT = 5\nmax_twist = 3\noutput_format = tsv\n");
    let path = cfg.to_str().unwrap();
    let (code, v) = json(&["--config", path, "--T", "6", "dictionary"]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["area"], "2");
    assert_eq!(v["config"]["T"], "6");
    assert_eq!(v["config"]["max_twist"], 3);
    let tsv = fukaya(&["--config", path, "tate-series", "--name", "s3", "--order", "3"]);
    let text = String::from_utf8(tsv.stdout).unwrap();
    assert!(text.starts_with("# config."), "{text}");
    assert!(text.contains("# config.T\t5\n"), "{text}");
    std::fs::remove_file(cfg).unwrap();
}

#[test]
fn unknown_config_keys_are_rejected() {
    let cfg = temp_file("bad.cfg", "truncation = 4\ncolour = blue\n");
    let out = fukaya(&["--config", cfg.to_str().unwrap(), "tate-series", "--name", "s3", "--order", "3"]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_file(cfg).unwrap();
}

#[test]
fn mu_tsv_matches_the_golden_layout() {
    let out = fukaya(&["mu", "--max-twist", "2", "--arity", "2,3", "--format", "tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let golden = include_str!("../../core/tests/golden/gamma_a2_mu23_T10.tsv");
    let body = |s: &str| s.lines().filter(|l| !l.starts_with('#')).map(String::from).collect::<Vec<_>>();
    assert_eq!(body(&text), body(golden));
}

#[test]
fn every_command_embeds_its_config() {
    for args in [
        vec!["polytope", "--kind", "multiplihedron", "--d", "3", "--codim", "2"],
        vec!["cone-report"],
        vec!["check-functor", "--functor", "projection", "--D", "3"],
    ] {
        let (code, v) = json(&args);
        assert_eq!(code, 0, "{args:?}");
        assert!(v["config"].is_object(), "{args:?}");
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn multiplihedron_has_six_vertices_in_dimension_two() {
    let (_, v) = json(&["polytope", "--kind", "multiplihedron", "--d", "3", "--codim", "2"]);
    assert_eq!(v["result"]["vertices"], 6);
    assert_eq!(v["result"]["faces"].as_array().unwrap().len(), 6);
    assert_eq!(v["result"]["f_vector"], serde_json::json!([6, 6, 1]));
}

#[test]
fn reports_follow_the_versioned_schema() {
    let schema: Value = serde_json::from_str(include_str!("../../../docs/schema/v1/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for args in [
        vec!["hf", "--l1", "1,0,0", "--l2", "1,1,0"],
        vec!["mu", "--max-twist", "2", "--arity", "2"],
        vec!["check-ainfty", "--max-twist", "2", "--D", "3"],
        vec!["check-functor", "--functor", "gauge", "--D", "3"],
        vec!["hh", "--hh-cap", "3"],
        vec!["cone-report"],
        vec!["dictionary", "--max-twist", "2"],
        vec!["massey"],
        vec!["polytope", "--kind", "associahedron", "--d", "4"],
        vec!["tate-series", "--name", "a6", "--order", "3"],
    ] {
        let (_, v) = json(&args);
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| format!("{e} at {}", e.instance_path())).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    let (_, mut v) = json(&["tate-series", "--name", "a4", "--order", "2"]);
    v["result"]["order"] = Value::from("two");
    assert!(!validator.is_valid(&v));
}

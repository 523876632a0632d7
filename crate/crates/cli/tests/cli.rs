use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dfslab"));
    c.env_remove("DFSLAB_TOL");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn schema_validator(name: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(root().join("docs/schemas").join(name)).expect("schema file");
    let schema: Value = serde_json::from_str(&text).expect("schema json");
    jsonschema::validator_for(&schema).expect("valid schema")
}

fn assert_valid(schema: &str, instance: &Value) {
    let v = schema_validator(schema);
    let errors: Vec<String> = v.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}");
}

fn stdout_json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn basis_dfs3_has_64_rows() {
    let v = stdout_json(&run(&["basis", "--dfs", "3"]));
    assert_eq!(v["elements"].as_array().unwrap().len(), 64);
    assert_valid("basis.schema.json", &v);
}

#[test]
fn basis_dfs4_has_256_rows() {
    let v = stdout_json(&run(&["basis", "--dfs", "4"]));
    assert_eq!(v["elements"].as_array().unwrap().len(), 256);
    assert_valid("basis.schema.json", &v);
    let csv = run(&["basis", "--dfs", "4", "--format", "csv"]);
    assert_eq!(code(&csv), 0);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 257);
}

#[test]
fn invalid_dfs_is_usage_error() {
    assert_eq!(code(&run(&["basis", "--dfs", "5"])), 2);
    assert_eq!(code(&run(&["states", "--dfs", "3"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["decompose", "--pair", "3,1", "--error", "scalar"])), 2);
    assert_eq!(code(&run(&["decompose", "--error", "dm"])), 2);
}

#[test]
fn states_dump_validates() {
    let v = stdout_json(&run(&["states", "dump", "--dfs", "4"]));
    assert_eq!(v["states"].as_array().unwrap().len(), 16);
    assert_valid("states.schema.json", &v);
}

#[test]
fn leo_reports_validate() {
    for dfs in ["3", "4"] {
        for method in ["canonical", "s2", "modified-z"] {
            let v = stdout_json(&run(&["leo", "--dfs", dfs, "--method", method]));
            assert_valid("leo.schema.json", &v);
            let g = &v["leo"]["grading_residuals"];
            assert!(g["max_even_commutator"].as_f64().unwrap() < 1e-10);
            assert!(g["max_odd_anticommutator"].as_f64().unwrap() < 1e-10);
        }
    }
}

#[test]
fn verify_suites_exit_zero() {
    for suite in ["dfs3", "leo", "errors"] {
        let o = run(&["verify", "--suite", suite]);
        let text = String::from_utf8_lossy(&o.stdout);
        assert_eq!(code(&o), 0, "{text}");
        assert!(!text.contains("FAIL"));
    }
    let v = stdout_json(&run(&["verify", "--suite", "dfs3", "--json"]));
    assert_valid("verify.schema.json", &v);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"dfs3.gram_offdiag"));
    assert!(names.contains(&"dfs3.collective_z_tilde_identity"));
}

#[test]
fn verify_leo_reports_rejection() {
    let o = run(&["verify", "--suite", "leo"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("PASS leo.dfs4_z_rejected_on_complement"));
}

#[test]
fn impossible_tolerance_fails_verification() {
    let o = bin().args(["verify", "--suite", "dfs3"]).env("DFSLAB_TOL", "1e-30").output().unwrap();
    assert_eq!(code(&o), 1);
    assert_eq!(code(&run(&["--tol", "-1", "verify"])), 2);
}

#[test]
fn paper_check_exits_zero() {
    let v = stdout_json(&run(&["decompose", "--paper-check"]));
    assert_eq!(v["passed"], Value::Bool(true));
    assert_valid("paper_check.schema.json", &v);
    let other = run(&["decompose", "--paper-check", "--beta", "-1,0.5,2", "--gamma1", "0.1,-0.2,0.3", "--gamma2", "1,1,-1"]);
    assert_eq!(stdout_json(&other)["passed"], Value::Bool(true));
}

#[test]
fn decompose_reports_validate() {
    let dm = stdout_json(&run(&["decompose", "--error", "dm", "--beta", "0.3,-0.6,0.9", "--drop", "leakage,cperp"]));
    assert_valid("decomposition_report.schema.json", &dm);
    let s = 1.0 / 3f64.sqrt();
    let surviving = dm["surviving"].as_array().unwrap();
    assert_eq!(surviving.len(), 3);
    for (t, b) in surviving.iter().zip([0.3, -0.6, 0.9]) {
        assert!((t["tilde_coefficient"]["re"].as_f64().unwrap() - s * b).abs() < 1e-12);
    }
    let p4 = stdout_json(&run(&[
        "decompose", "--dfs", "4", "--pair", "1,2", "--gamma1", "1,0,0", "--gamma2", "1,0,0", "--drop", "leakage,cperp",
    ]));
    assert_valid("decomposition_report.schema.json", &p4);
    let logical = p4["surviving_after_stabilizer"].as_array().unwrap();
    assert_eq!(logical.len(), 1);
    assert!((logical[0]["tilde_coefficient"]["re"].as_f64().unwrap() + 1.0 / (3.0 * 2f64.sqrt())).abs() < 1e-12);
}

#[test]
fn tensor_file_matches_dm_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    // antisymmetric part only: beta = (0, 0, 0.5)
    std::fs::write(&path, r#"{"pair": [1, 2], "g": [[0, 0.5, 0], [-0.5, 0, 0], [0, 0, 0]]}"#).unwrap();
    let from_file = stdout_json(&run(&["decompose", "--error", "tensor-file", "--tensor", path.to_str().unwrap()]));
    let from_flag = stdout_json(&run(&["decompose", "--error", "dm", "--beta", "0,0,0.5"]));
    assert_eq!(from_file["terms"], from_flag["terms"]);
    std::fs::write(&path, r#"{"pair": [1, 2], "g": [[0, 0.5, 0], [-0.5, 0, 0], [0, 0, 0]], "extra": 1}"#).unwrap();
    let bad = run(&["decompose", "--error", "tensor-file", "--tensor", path.to_str().unwrap()]);
    assert_eq!(code(&bad), 2);
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn simulate_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = root().join("configs/open_system.json");
    let config: Value = serde_json::from_str(&std::fs::read_to_string(&cfg).unwrap()).unwrap();
    assert_valid("run_config.schema.json", &config);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let csv = dir.path().join("a.csv");
    for (out, extra) in [(&a, Some(&csv)), (&b, None)] {
        let mut args = vec!["simulate", "--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()];
        if let Some(c) = extra {
            args.extend(["--csv", c.to_str().unwrap()]);
        }
        assert_eq!(code(&run(&args)), 0);
    }
    let bytes_a = std::fs::read(&a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&bytes_a).unwrap();
    assert_valid("simulation_report.schema.json", &v);
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("n,leakage_norm,fidelity,limit_error"));
    assert_eq!(rows.lines().count(), 1 + 1 + 4);
}

#[test]
fn pure_leakage_sweep_is_monotone() {
    let cfg = root().join("configs/pure_leakage.json");
    let v = stdout_json(&run(&["simulate", "--config", cfg.to_str().unwrap()]));
    assert_valid("simulation_report.schema.json", &v);
    assert_eq!(v["report"]["monotone_non_increasing"], Value::Bool(true));
    let drift = stdout_json(&run(&["simulate", "--config", root().join("configs/parity_kick.json").to_str().unwrap()]));
    let slope = drift["report"]["slope"].as_f64().unwrap();
    assert!((slope + 1.0).abs() < 0.15, "{slope}");
}

#[test]
fn shipped_configs_validate() {
    for entry in std::fs::read_dir(root().join("configs")).unwrap() {
        let path = entry.unwrap().path();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_valid("run_config.schema.json", &v);
    }
}

#[test]
fn config_errors_carry_json_pointers() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"kind":"parity_kick","dfs":3,"total_time":0.2,"cycles":[1],"hamiltonian":[{"tilde":"XXI","coef":1}]}"#, "/hamiltonian/0/coef"),
        (r#"{"kind":"parity_kick","dfs":3,"total_time":"x","cycles":[1],"hamiltonian":[]}"#, "/total_time"),
        (r#"{"kind":"parity_kick","dfs":3,"total_time":0.2,"cycles":[1,0],"hamiltonian":[{"tilde":"XXI"}]}"#, "/cycles/1"),
        (r#"{"kind":"parity_kick","dfs":3,"total_time":0.2,"cycles":[1],"hamiltonian":[{"tilde":"XXII"}]}"#, "/hamiltonian/0/tilde"),
        (r#"{"kind":"open_system","dfs":3,"total_time":0.2,"cycles":[1]}"#, "/bath"),
        (r#"{"kind":"parity_kick","dfs":3,"total_time":0.2,"cycles":[1],"hamiltonian":[{"tilde":"XXI"}],"surprise":true}"#, "surprise"),
    ];
    for (i, (text, pointer)) in cases.iter().enumerate() {
        let p = write_config(dir.path(), &format!("c{i}.json"), text);
        let o = run(&["simulate", "--config", p.to_str().unwrap()]);
        let err = String::from_utf8_lossy(&o.stderr);
        assert_eq!(code(&o), 2, "{err}");
        assert!(err.contains(pointer), "{err}");
        assert!(o.stdout.is_empty());
    }
}

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dioph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dioph")).args(args).env_remove("DIOPH_CATALOGUE").output().expect("spawn dioph")
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn write(dir: &Path, name: &str, body: &[u8]) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn nonzero_witness_for_5i() {
    let v = json(&dioph(&["nonzero", "--field", "gauss", "--a", "0,5"]));
    assert_eq!(v["verified"], Value::Bool(true));
    assert_eq!(v["assignment"]["a"], serde_json::json!(["0", "5"]));
    assert!(v["assignment"]["x"].is_array() && v["assignment"]["y"].is_array());
}

#[test]
fn nonzero_at_zero_is_a_domain_error() {
    assert_eq!(dioph(&["nonzero", "--field", "gauss", "--a", "0,0"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(dioph(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dioph(&["nonzero", "--field", "gauss"]).status.code(), Some(2));
    assert_eq!(dioph(&["nonzero", "--field", "gauss", "--a", "1"]).status.code(), Some(2));
    assert_eq!(dioph(&["emit", "--predicate", "nope", "--field", "Q"]).status.code(), Some(2));
    assert_eq!(dioph(&["--help"]).status.code(), Some(0));
}

#[test]
fn unknown_field_is_a_domain_error() {
    let o = dioph(&["field", "--field", "nowhere"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("UnknownField"));
}

#[test]
fn approx_with_bad_reduction_modulus_exits_1() {
    let o = dioph(&["approx", "--curve", "mordell_m2", "--k", "1", "--modulus", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("BadReduction"));
    assert!(o.stdout.is_empty());
}

#[test]
fn approx_certificate() {
    let v = json(&dioph(&["approx", "--curve", "mordell_m2", "--k", "2", "--modulus", "35"]));
    assert_eq!(v["certificate"]["verified"], Value::Bool(true));
    assert_eq!(v["k"], 2);
}

#[test]
fn resource_budget_exits_3() {
    let o = dioph(&["--digit-budget", "3", "approx", "--curve", "mordell_m2", "--k", "1", "--modulus", "25"]);
    assert_eq!(o.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn forcing_n_and_check() {
    assert_eq!(json(&dioph(&["forcing", "n", "--ell", "4"]))["n"], 93);
    // alpha = 50 in Z[i], I = (prod (50 - j)), k = 50
    let prod: num_bigint::BigInt = (1..=47).map(|j| num_bigint::BigInt::from(50 - j)).product();
    let p = prod.to_string();
    let v = json(&dioph(&["forcing", "check", "--field", "gauss", "--alpha", "50,0", "--ideal", &p, "--k", "50"]));
    assert_eq!(v["hypotheses"], Value::Bool(true));
    assert_eq!(v["verdict"], "alpha_in_base");
}

#[test]
fn emit_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dioph(&["emit", "--predicate", "nonzero", "--field", "gauss"]);
    let sys_path = write(dir.path(), "sys.json", &json(&sys).to_string().into_bytes());
    let w = dioph(&["nonzero", "--field", "gauss", "--a", "3,-2"]);
    let w_path = write(dir.path(), "w.json", &w.stdout);
    let v = json(&dioph(&["verify", "--system", &sys_path, "--witness", &w_path]));
    assert_eq!(v["satisfied"], Value::Bool(true));

    let bad = write(dir.path(), "bad.json", br#"{"assignment": {"a": ["3", "-2"], "x": ["1", "0"], "y": ["0", "0"]}}"#);
    assert_eq!(json(&dioph(&["verify", "--system", &sys_path, "--witness", &bad]))["satisfied"], Value::Bool(false));
    let missing = write(dir.path(), "missing.json", br#"{"assignment": {"a": ["3", "-2"]}}"#);
    assert_eq!(dioph(&["verify", "--system", &sys_path, "--witness", &missing]).status.code(), Some(1));

    let sc = json(&dioph(&["scalarize", "--system", &sys_path, "--witness", &w_path]));
    assert_eq!(sc["satisfied"], Value::Bool(true));
    assert_eq!(sc["round_trip"], Value::Bool(true));
    assert_eq!(sc["assignment"].as_array().unwrap().len(), 6);
}

#[test]
fn emitted_predicates_match_golden_files() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden");
    for kind in ["ideal_membership", "congruence", "nonzero"] {
        let o = dioph(&["emit", "--predicate", kind, "--field", "gauss"]);
        let on_disk = std::fs::read_to_string(golden.join(format!("{kind}.json"))).unwrap();
        assert_eq!(String::from_utf8_lossy(&o.stdout), on_disk, "{kind}");
    }
}

#[test]
fn bind_fixes_parameters() {
    let v = json(&dioph(&["emit", "--predicate", "ideal_membership", "--field", "gauss", "--bind", "a=1,1", "--bind", "i1=2,0"]));
    assert_eq!(v["parameters"], serde_json::json!(["i2"]));
    let o = dioph(&["emit", "--predicate", "ideal_membership", "--field", "gauss", "--bind", "zz=1,1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn plan_for_gauss_has_one_step() {
    let v = json(&dioph(&["plan", "--field", "gauss"]));
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.iter().filter(|s| s["kind"] == "ascent").count(), 1);
    assert_eq!(dioph(&["plan", "--field", "cbrt2"]).status.code(), Some(1));
}

#[test]
fn catalogue_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "fields.json", br#"[{"name": "sqrt7", "defining_poly": ["-7", "0", "1"]}]"#);
    let o = Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(["field", "--field", "sqrt7"])
        .env("DIOPH_CATALOGUE", dir.path())
        .output()
        .unwrap();
    assert_eq!(json(&o)["discriminant"], "28");
}

#[test]
fn selftest_is_byte_identical() {
    let a = dioph(&["selftest", "--seed", "42", "--quick"]);
    let b = dioph(&["selftest", "--seed", "42", "--quick", "--jobs", "2"]);
    assert_eq!(a.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
}

use std::process::{Command, Output};

use serde_json::Value;

fn field(name: &str) -> String {
    format!("{}/../../fields/{name}.toml", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_closefield")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn field_info_reports_invariants() {
    let v = json(&["field", "info", "--field", &field("q2_quartic")]);
    assert_eq!(v["e"], 4);
    assert_eq!(v["q"], 2);
    assert_eq!(v["kind"], "mixed");
    let v = json(&["field", "info", "--field", &field("f4t")]);
    assert_eq!(v["q"], 4);
    assert_eq!(v["e"], Value::Null);
}

#[test]
fn field_iso_checks_the_truncation() {
    let v = json(&["field", "iso", "--field", &field("q2_sqrt2"), "--level", "2"]);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert_eq!(v["pairs_checked"], 16);
    assert_eq!(run(&["field", "iso", "--field", &field("q2"), "--level", "2"]).status.code(), Some(2));
}

#[test]
fn spherical_convolution() {
    let v = json(&[
        "hecke", "convolve", "--field", &field("q3"), "--level", "0", "--a", r#"{"nu":[1,0]}"#, "--b",
        r#"{"nu":[1,0]}"#,
    ]);
    let terms = v["terms"].as_array().unwrap();
    let pick = |nu: [i64; 2]| {
        terms.iter().find(|t| t["coset"]["nu"] == serde_json::json!(nu)).map(|t| t["coeff"].as_i64().unwrap())
    };
    assert_eq!(pick([2, 0]), Some(1));
    assert_eq!(pick([1, 1]), Some(4));
    assert_eq!(terms.len(), 2);
}

#[test]
fn left_cosets_and_classes() {
    let v = json(&["hecke", "cosets", "--field", &field("q2"), "--level", "0", "--coset", r#"{"nu":[2,0]}"#]);
    assert_eq!(v["count"], 6);
    let v = json(&["hecke", "classes", "--field", &field("q2_sqrt2"), "--level", "1", "--nu", "1,0"]);
    assert_eq!(v.as_array().unwrap().len(), 9);
}

#[test]
fn close_verify_passes_and_is_deterministic() {
    let args = [
        "close-verify", "--field-a", &field("q2_sqrt2"), "--field-b", &field("f2t"), "--level", "1", "--json",
    ];
    let first = run(&args);
    assert!(first.status.success());
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["summary"]["discrepancies"], 0);
    assert_eq!(v["summary"]["all_equal"], true);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn family_hecke_has_no_exceptions() {
    let fields = format!("{},{}", field("q2_sqrt2"), field("q2_quartic"));
    let v = json(&["family-hecke", "--fields", &fields, "--tail", &field("f2t"), "--level", "1"]);
    assert_eq!(v["exceptions"].as_object().map_or(0, |m| m.len()), 0);
}

#[test]
fn witt_and_lubin_tate_commands() {
    let v = json(&["witt", "laws", "--field", &field("q2"), "--n", "2", "--precision", "4"]);
    assert_eq!(v["classical_match"], true);
    let v = json(&["witt", "theta", "--field", &field("q3_sqrt3"), "--n", "2"]);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    let v = json(&["lt", "tower", "--field", &field("q2_sqrt2"), "--n", "2", "--deg", "8", "--precision", "8"]);
    assert!(v["report"]["checks"].as_array().unwrap().iter().all(|c| c[1] == true));
    let v = json(&["lt", "mult", "--field", &field("q2"), "--deg", "4", "--precision", "4", "--a", "-1"]);
    assert_eq!(v["X"], serde_json::json!([1, 1, 1, 1]));
    let out = run(&["lt", "log", "--field", &field("q2"), "--deg", "4", "--precision", "4"]);
    assert!(out.status.success());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["field", "info", "--field", "/nonexistent.toml"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let bad = run(&["hecke", "convolve", "--field", &field("q2"), "--level", "0", "--a", "x", "--b", "x"]);
    assert_eq!(bad.status.code(), Some(2));
    let tight = run(&[
        "hecke", "convolve", "--field", &field("q2_sqrt2"), "--level", "1", "--a", r#"{"nu":[2,-2]}"#, "--b",
        r#"{"nu":[1,0]}"#, "--budget", "10",
    ]);
    assert_eq!(tight.status.code(), Some(3));
    let far = run(&["close-verify", "--field-a", &field("q2"), "--field-b", &field("f2t"), "--level", "2"]);
    assert_eq!(far.status.code(), Some(2));
    let mismatch = run(&["close-verify", "--field-a", &field("q3"), "--field-b", &field("f2t"), "--level", "0"]);
    assert_eq!(mismatch.status.code(), Some(2));
}

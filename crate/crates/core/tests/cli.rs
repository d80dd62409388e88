use std::io::Write;
use std::process::{Command, Stdio};

use gerbe_core::json::{parse_cochain, parse_group, DEFAULT_MAX_ORDER};
use serde_json::{json, Value};

fn run_with(args: &[&str], payload: &Value, env: &[(&str, &str)]) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gerbe"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(payload.to_string().as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), report)
}

fn run(args: &[&str], payload: Value) -> (i32, Value) {
    run_with(args, &payload, &[])
}

fn ok(args: &[&str], payload: Value) -> Value {
    let (code, r) = run(args, payload);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["status"], "ok");
    r["result"].clone()
}

fn cyclic(n: u64) -> Value {
    json!({"kind": "abelian", "factors": [n]})
}

fn gerbe(group: Value, entries: Value) -> Value {
    json!({"group": group, "alpha": {"degree": 3, "entries": entries}})
}

#[test]
fn inspect() {
    let r = ok(&["group", "inspect"], json!({"group": {"kind": "table", "table": [[0]]}}));
    assert_eq!(r["order"], 1);
    assert_eq!(r["abelian"], true);
    let r = ok(&["group", "inspect"], json!({"group": {"kind": "perm", "degree": 3, "generators": [[1, 2, 0], [1, 0, 2]]}}));
    assert_eq!(r["order"], 6);
    assert_eq!(r["abelian"], false);
    assert_eq!(r["center"], json!([0]));
}

#[test]
fn malformed_tables_are_input_errors() {
    let (code, r) = run(&["group", "inspect"], json!({"group": {"kind": "table", "table": [[0, 1], [0, 1]]}}));
    assert_eq!(code, 2);
    assert_eq!(r["status"], "error");
    assert_eq!(r["error"]["kind"], "input");
    let mut child = Command::new(env!("CARGO_BIN_EXE_gerbe"))
        .args(["cohomology"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"{not json").unwrap();
    assert_eq!(child.wait_with_output().unwrap().status.code(), Some(2));
}

#[test]
fn order_cap_is_a_resource_error() {
    let (code, r) = run(&["group", "inspect"], json!({"group": cyclic(5000)}));
    assert_eq!(code, 3);
    assert_eq!(r["error"]["kind"], "resource");
    let (code, _) = run_with(&["group", "inspect"], &json!({"group": cyclic(20)}), &[("GERBE_MAX_ORDER", "10")]);
    assert_eq!(code, 3);
}

#[test]
fn extension_to_cyclic_four() {
    let payload = json!({"s": [2], "k": cyclic(2), "cocycle": {"degree": 2, "entries": [{"args": [1, 1], "value": [1]}]}});
    let r = ok(&["group", "extension"], payload);
    assert_eq!(r["group"]["order"], 4);
    assert_eq!(r["group"]["order_census"]["4"], 2);
}

#[test]
fn quotient_of_cyclic_four() {
    let r = ok(&["group", "quotient"], json!({"group": cyclic(4), "central_subgroup": [0, 2]}));
    assert_eq!(r["quotient"]["table"], json!([[0, 1], [1, 0]]));
}

#[test]
fn cohomology_examples() {
    let r = ok(&["cohomology"], json!({"group": cyclic(2), "degree": 3}));
    assert_eq!(r["factors"], json!([2]));
    let r = ok(&["cohomology"], json!({"group": {"kind": "table", "table": [[0]]}, "degree": 3}));
    assert_eq!(r["factors"], json!([]));
    let r = ok(&["cohomology"], json!({"group": cyclic(3), "degree": 2}));
    assert_eq!(r["factors"], json!([]));
}

#[test]
fn cocycles() {
    let f = json!({"degree": 2, "entries": [{"args": [1, 1], "value": "1/2"}]});
    let r = ok(&["cocycle", "check"], json!({"group": cyclic(2), "cochain": f}));
    assert_eq!(r["cocycle"], true);
    let r = ok(&["cocycle", "solve"], json!({"group": cyclic(2), "cochain": f}));
    assert_eq!(r["primitive"]["entries"][0]["value"], "1/4");
    let gen = json!({"degree": 3, "entries": [{"args": [1, 1, 1], "value": "1/2"}]});
    let zero = json!({"degree": 3, "entries": []});
    let r = ok(&["cocycle", "equal"], json!({"group": cyclic(2), "a": gen, "b": zero}));
    assert_eq!(r["equal"], false);
}

#[test]
fn duals() {
    let r = ok(&["dual"], json!({"gerbe": gerbe(cyclic(4), json!([])), "central_subgroup": [0, 2]}));
    assert_eq!(r["dual_group"]["factors"], json!([2, 2]));
    assert_eq!(r["classes"]["F_trivial"], false);
    assert_eq!(r["classes"]["alpha_hat_trivial"], false);
    let r = ok(&["dual"], json!({"gerbe": gerbe(cyclic(3), json!([])), "central_subgroup": [0, 1, 2]}));
    assert_eq!(r["dual_group"]["order"], 3);
    assert_eq!(r["classes"]["alpha_hat_trivial"], true);
    let r = ok(&["doubledual"], json!({"gerbe": gerbe(cyclic(4), json!([])), "central_subgroup": [0, 2]}));
    assert!(r.is_object());
}

#[test]
fn omega_failure_reports_the_stage() {
    let g = gerbe(cyclic(2), json!([{"args": [1, 1, 1], "value": "1/2"}]));
    let (code, r) = run(&["dual"], json!({"gerbe": g, "central_subgroup": [0, 1]}));
    assert_eq!(code, 1);
    assert_eq!(r["error"]["kind"], "mathematical");
    assert_eq!(r["error"]["stage"], 1);
}

#[test]
fn representations() {
    let g = gerbe(cyclic(2), json!([{"args": [1, 1, 1], "value": "1/2"}]));
    let r = ok(&["gerbe", "rep", "canonical"], json!({"gerbe": g}));
    assert_eq!(r["verified"], true);
    assert_eq!(r["representation"]["space_size"], 2);
    let r = ok(&["gerbe", "rep", "exists"], json!({"gerbe": g}));
    assert_eq!(r["exists"], false);
    let regular = json!({"action": [[0, 1], [1, 0]]});
    let r = ok(&["gerbe", "rep", "count"], json!({"gerbe": g, "space": regular}));
    assert_eq!(r["count"], 1);
}

#[test]
fn crossed_modules() {
    let d4 = json!({"kind": "perm", "degree": 4, "generators": [[1, 2, 3, 0], [3, 2, 1, 0]]});
    let center = ok(&["group", "inspect"], json!({"group": d4}))["center"].clone();
    assert_eq!(center.as_array().unwrap().len(), 2);
    let r = ok(&["crossmod", "pair"], json!({"group": d4, "central_subgroup": center}));
    assert_eq!(r["pi0_distinguished"], true);
}

#[test]
fn spectral_table() {
    let r = ok(&["spectral", "e2"], json!({"k": cyclic(2), "s": [2]}));
    assert_eq!(r["orders"], json!([["inf", 2, 1, 2], [2, 2, 2, 2], [1, 1, 1, 1]]));
    let g = gerbe(cyclic(2), json!([{"args": [1, 1, 1], "value": "1/2"}]));
    let r = ok(&["spectral", "restrict"], json!({"gerbe": g, "subgroup": [0, 1]}));
    assert_eq!(r["trivial"], false);
}

#[test]
fn reports_are_deterministic() {
    let payload = json!({"gerbe": gerbe(cyclic(4), json!([])), "central_subgroup": [0, 2]});
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let (_, a) = run_with(&["dual", "--emit-witness"], &payload, &[]);
    let (_, b) = run_with(&["dual"], &payload, &[("GERBE_EMIT_WITNESS", "true")]);
    assert_eq!(strip(a.clone()), strip(b));
    assert!(a["result"]["witness"]["beta"].is_object());
}

#[test]
fn outputs_parse_back() {
    let r = ok(&["cohomology"], json!({"group": cyclic(4), "degree": 3}));
    let gen = &r["generators"][0];
    let c = parse_cochain(gen, None, DEFAULT_MAX_ORDER).unwrap();
    assert!(c.is_cocycle());
    let r = ok(&["group", "inspect"], json!({"group": cyclic(6)}));
    assert_eq!(parse_group(&r["group"], DEFAULT_MAX_ORDER).unwrap().group.order(), 6);
    let again = ok(&["group", "inspect"], json!({"group": r["group"]}));
    assert_eq!(again, r);
}

#[test]
fn input_file() {
    let dir = std::env::temp_dir().join(format!("gerbe-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("payload.json");
    std::fs::write(&path, json!({"group": cyclic(2), "degree": 1}).to_string()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gerbe"))
        .args(["cohomology", "--input", path.to_str().unwrap()])
        .stdin(Stdio::null())
        .output()
        .unwrap();
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["result"]["factors"], json!([2]));
    std::fs::remove_dir_all(&dir).unwrap();
}

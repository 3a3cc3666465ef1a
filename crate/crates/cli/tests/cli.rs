use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

fn polyheis(args: &[&str], stdin: &str) -> (i32, Value, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polyheis"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or(Value::Null);
    (out.status.code().unwrap(), value, text)
}

fn ge(u: &str, coeffs: &[&str]) -> Value {
    let n = coeffs.len() - 1;
    json!({"n": n, "u": u, "P": {"n": n, "coeffs": coeffs}})
}

fn halves(lo: &str, mid: &str, hi: &str) -> Value {
    json!({
        "of": [{"lo": lo, "hi": hi}],
        "cells": [[{"lo": lo, "hi": mid}], [{"lo": mid, "hi": hi}]],
    })
}

#[test]
fn compose_documented_pairs() {
    let (code, v, _) = polyheis(&["compose"], &json!({"g": ge("1", &["0", "1"]), "h": ge("1", &["0", "1"])}).to_string());
    assert_eq!(code, 0);
    assert_eq!(v, ge("2/1", &["0/1", "2/1"]));

    let (_, v, _) = polyheis(&["compose"], &json!({"g": ge("1", &["0", "1"]), "h": ge("-1", &["0", "1"])}).to_string());
    assert_eq!(v, ge("0/1", &["1/1", "2/1"]));
}

#[test]
fn invert_tw_shift() {
    let (_, v, _) = polyheis(&["invert"], &ge("3/2", &["1", "-2"]).to_string());
    assert_eq!(v, ge("-3/2", &["-1/1", "2/1"]));

    let p = json!({"n": 2, "coeffs": ["0", "0", "1"]});
    let (_, v, _) = polyheis(&["tw"], &json!({"w": "1", "P": p}).to_string());
    assert_eq!(v["coeffs"], json!(["1/3", "1/1", "1/1"]));
    let (_, back, _) = polyheis(&["tw"], &json!({"w": "1", "P": v, "inverse": true}).to_string());
    assert_eq!(back["coeffs"], json!(["0/1", "0/1", "1/1"]));

    let (_, v, _) = polyheis(&["shift"], &json!({"u": "2", "P": p}).to_string());
    assert_eq!(v["coeffs"], json!(["4/1", "4/1", "1/1"]));
}

#[test]
fn khat_exact_and_float() {
    let g = ge("1", &["1", "1", "1"]);
    let (_, v, _) = polyheis(&["khat"], &json!({"length": "4", "g": g}).to_string());
    assert_eq!(v["exact"], true);
    assert_eq!(v["value"], ge("2/1", &["4/1", "2/1", "1/1"]));
    let (_, v, _) = polyheis(&["khat"], &json!({"length": "2", "g": g}).to_string());
    assert_eq!(v["exact"], false);
    assert!((v["value"]["u"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn brackets_and_jacobi() {
    let chi = json!([{"lo": "0", "hi": "1", "val": "1"}]);
    let l2 = json!({"n": 1, "l0": "0", "fields": [[], chi]});
    let l1 = json!({"n": 1, "l0": "0", "fields": [chi, []]});
    // [L_2(chi), L_1(chi)] = L_0(chi) = |I| L_0
    let (code, v, _) = polyheis(&["bracket"], &json!({"x": l2, "y": l1}).to_string());
    assert_eq!(code, 0);
    assert_eq!(v["l0"], "1/1");

    let (code, v, _) = polyheis(&["jacobi"], &json!({"x": l2, "y": l1, "z": l2}).to_string());
    assert_eq!(code, 0);
    assert_eq!(v["zero"], true);

    let x = json!({"n": 1, "u": "1", "a": ["0", "0"]});
    let y = json!({"n": 1, "u": "0", "a": ["0", "1"]});
    let (_, v, _) = polyheis(&["bracket"], &json!({"x": x, "y": y}).to_string());
    assert_eq!(v["a"], json!(["1/1", "0/1"]));
}

#[test]
fn rescale_constants_report() {
    let (code, v, _) = polyheis(&["rescale-constants"], r#"{"length": "4", "a": "1", "n": 3}"#);
    assert_eq!(code, 0);
    assert_eq!(v["exact"], true);
    assert_eq!(v["b"], "2/1");
    assert_eq!(v["c"], json!(["2/1", "1/1", "1/2"]));
    assert_eq!(v["preserves_brackets"], true);
}

#[test]
fn embed_refine_and_cocycle() {
    let g = ge("1", &["0", "1"]);
    let doc = json!({
        "n": 1,
        "partition": halves("0", "1", "2"),
        "region": [{"lo": "0", "hi": "2"}],
        "elem": [{"g": g, "c": {"re": 1.0, "im": 0.0}}],
    });
    let (code, t, _) = polyheis(&["embed"], &doc.to_string());
    assert_eq!(code, 0);
    assert_eq!(t["words"].as_array().unwrap().len(), 1);
    assert_eq!(t["words"][0]["factors"].as_array().unwrap().len(), 2);

    let quarters = json!({
        "of": [{"lo": "0", "hi": "2"}],
        "cells": [[{"lo": "0", "hi": "1/2"}], [{"lo": "1/2", "hi": "1"}], [{"lo": "1", "hi": "2"}]],
    });
    let (code, r, _) = polyheis(&["refine"], &json!({"tensor": t, "finer": quarters}).to_string());
    assert_eq!(code, 0);
    assert_eq!(r["words"][0]["factors"].as_array().unwrap().len(), 3);

    let (code, v, _) = polyheis(&["cocycle-check"], &json!({"tensor": t, "chain": [quarters]}).to_string());
    assert_eq!(code, 0);
    assert_eq!(v["consistent"], true);

    // a coarser partition is not a refinement
    let (code, v, _) = polyheis(
        &["cocycle-check"],
        &json!({"tensor": r, "chain": [halves("0", "1", "2")]}).to_string(),
    );
    assert_eq!(code, 1);
    assert!(v["error"].is_string());
}

#[test]
fn state_and_factor_check() {
    let s1 = json!({"n": 1});
    let (_, v, _) = polyheis(&["state"], &json!({"state": s1, "region": [{"lo": "0", "hi": "1"}], "g": ge("2", &["0", "0"])}).to_string());
    assert!((v["re"].as_f64().unwrap() - (-1f64).exp()).abs() < 1e-15);

    let lp = json!({"n": 1, "weighting": "length_proportional"});
    let (code, v, _) = polyheis(&["factor-check"], &json!({"state": lp, "partition": halves("0", "1/2", "1"), "g": ge("2", &["0", "0"])}).to_string());
    assert_eq!(code, 0);
    let expected = (-0.5f64).exp() - (-1f64).exp();
    assert!((v["defect"].as_f64().unwrap() - expected).abs() < 1e-15);

    let (_, v, _) = polyheis(&["factor-check"], &json!({"state": s1, "partition": halves("0", "1/2", "1"), "g": ge("2", &["1", "-1"])}).to_string());
    assert!(v["defect"].as_f64().unwrap() < 1e-12);
}

#[test]
fn nogo_n1_passes() {
    let (code, v, _) = polyheis(&["nogo", "--n", "1", "--trials", "1000", "--seed", "7"], "");
    assert_eq!(code, 0);
    assert!(v["max_defect"].as_f64().unwrap() < 1e-12);
}

#[test]
fn nogo_n2_reference_ratio() {
    // A = 1
    for args in [["--a2", "2"], ["--quad-a", "1"]] {
        let mut all = vec!["nogo", "--n", "2", "--trials", "20", "--seed", "3", "--cells", "2"];
        all.extend(args);
        let (code, v, _) = polyheis(&all, "");
        assert_eq!(code, 0);
        for c in v["ratio_checks"].as_array().unwrap() {
            let (re, im) = (c["measured"]["re"].as_f64().unwrap(), c["measured"]["im"].as_f64().unwrap());
            assert!((re.hypot(im) - 0.6687403).abs() < 1e-7);
            assert!((re.hypot(im) - 5f64.powf(-0.25)).abs() < 1e-9);
        }
    }
}

#[test]
fn nogo_failure_exit_code() {
    // the n = 1 claim does not hold for n = 2 states
    let (code, v, _) = polyheis(&["nogo", "--n", "2", "--trials", "20", "--seed", "1", "--tolerance", "0"], "");
    assert_eq!(code, 3);
    assert_eq!(v["passed"], false);
}

#[test]
fn gram_and_oracle() {
    let s2 = json!({"n": 2});
    let elems = [ge("0", &["0", "0", "0"]), ge("1/2", &["0", "1/3", "1/4"]), ge("-1", &["2", "0", "-1/2"])];
    let (code, v, _) = polyheis(&["gram"], &json!({"state": s2, "region": [{"lo": "0", "hi": "1"}], "elems": elems}).to_string());
    assert_eq!(code, 0);
    assert_eq!(v["psd"], true);

    let (code, v, _) = polyheis(&["oracle"], &json!({"g": ge("0", &["0", "0", "1/10"]), "h": ge("1/2", &["0", "1/2", "0"])}).to_string());
    assert_eq!(code, 0);
    assert!(v["state_error"].as_f64().unwrap() < 1e-3);
    assert!(v["compose_error"].as_f64().unwrap() < 1e-3);
}

#[test]
fn error_exit_codes() {
    let (code, v, _) = polyheis(&["compose"], "{not json");
    assert_eq!(code, 2);
    assert!(v["error"].is_string());
    let (code, _, _) = polyheis(&["compose"], r#"{"g": {"n": 1}}"#);
    assert_eq!(code, 2);
    let (code, _, _) = polyheis(&["invert"], r#"{"n": 1, "u": "1/0", "P": {"n": 1, "coeffs": ["0", "0"]}}"#);
    assert_eq!(code, 2);
    // degree mismatch is a domain error
    let (code, v, _) = polyheis(&["compose"], &json!({"g": ge("1", &["0", "1"]), "h": ge("1", &["0", "1", "0"])}).to_string());
    assert_eq!(code, 1);
    assert!(v["error"].is_string());
    let (code, _, _) = polyheis(&["khat"], &json!({"length": "-1", "g": ge("1", &["0", "1"])}).to_string());
    assert_eq!(code, 1);
    let (code, _, _) = polyheis(&["state"], &json!({"state": {"n": 3}, "region": [{"lo": "0", "hi": "1"}], "g": ge("0", &["0", "0", "0", "0"])}).to_string());
    assert_eq!(code, 1);
    let (code, _, _) = polyheis(&["frobnicate"], "");
    assert_eq!(code, 2);
}

#[test]
fn results_reparse_to_the_same_value() {
    let g = ge("7/3", &["-1/2", "5", "1/9"]);
    let h = ge("-2", &["1", "0", "3/4"]);
    let (_, gh, _) = polyheis(&["compose"], &json!({"g": g, "h": h}).to_string());
    // feed the result back: (gh) o (gh)^-1 must be the identity
    let (_, inv, _) = polyheis(&["invert"], &gh.to_string());
    let (_, e, _) = polyheis(&["compose"], &json!({"g": gh, "h": inv}).to_string());
    assert_eq!(e, ge("0/1", &["0/1", "0/1", "0/1"]));

    let doc = json!({
        "n": 2,
        "partition": halves("0", "1", "2"),
        "region": [{"lo": "0", "hi": "2"}],
        "elem": [{"g": g, "c": {"re": 0.5, "im": -1.0}}, {"g": h, "c": {"re": 2.0, "im": 0.0}}],
    });
    let (_, t, _) = polyheis(&["embed"], &doc.to_string());
    let (_, t2, _) = polyheis(&["refine"], &json!({"tensor": t, "finer": halves("0", "1", "2")}).to_string());
    assert_eq!(t, t2);
}

#[test]
fn output_is_deterministic() {
    let args = ["nogo", "--n", "2", "--trials", "200", "--seed", "11"];
    let (_, _, a) = polyheis(&args, "");
    let (_, _, b) = polyheis(&args, "");
    assert_eq!(a, b);
    let (_, _, pretty) = polyheis(&["nogo", "--n", "1", "--trials", "5", "--pretty"], "");
    assert!(pretty.contains("\n  \"max_defect\""));
}

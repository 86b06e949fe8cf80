use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use higgspair::oracle::pairs_betti;
use higgspair::ModuliParams;
use num_bigint::BigInt;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_higgspair")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

/// `[[e, "c"], ...]` back to a dense coefficient vector.
fn dense(v: &Value) -> Vec<BigInt> {
    let mut out = Vec::new();
    for pair in v.as_array().unwrap() {
        let e = pair[0].as_u64().unwrap() as usize;
        if out.len() <= e {
            out.resize(e + 1, BigInt::from(0));
        }
        out[e] = pair[1].as_str().unwrap().parse().unwrap();
    }
    out
}

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect()
}

#[test]
fn betti_matches_golden_files() {
    for (name, args) in [
        ("betti_g2_k5.json", ["--genus", "2", "--degree", "5", "--tau-bar", "27/10"]),
        ("betti_g3_k11.json", ["--genus", "3", "--degree", "11", "--tau-bar", "23/4"]),
    ] {
        let path = golden(name);
        let mut full = vec!["betti"];
        full.extend(args);
        full.extend(["--golden", path.to_str().unwrap()]);
        let out = run(&full);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn golden_agrees_with_independent_expansion() {
    let text = std::fs::read_to_string(golden("betti_g2_k5.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let (_, quotient) = pairs_betti(&ModuliParams::with_ratio(2, 5, 27, 10));
    let oracle = quotient.unwrap().to_dense().unwrap();
    let n0 = dense(&v["n0_poly"]);
    assert_eq!(n0, oracle);
    assert_eq!(n0[0], BigInt::from(1));
    let strata = v["strata"].as_array().unwrap().iter().fold(n0, |acc, s| add(&acc, &dense(&s["poly"])));
    assert_eq!(strata, dense(&v["total_poly"]));
    assert_eq!(v["extraction_check"]["matches"], Value::Bool(true));
}

#[test]
fn golden_mismatch_is_an_integrity_failure() {
    let path = scratch("wrong_golden.json");
    std::fs::write(&path, "{}\n").unwrap();
    let out = run(&["betti", "--genus", "2", "--degree", "5", "--tau-bar", "27/10", "--golden", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["betti", "--genus", "2", "--degree", "7", "--tau-bar", "15/4", "--convention", "as-printed"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["extraction_check"]["convention"], "as_printed");
    assert_eq!(v["extraction_check"]["matches"], false);
}

#[test]
fn bad_parameters_exit_with_validation_code() {
    let out = run(&["betti", "--genus", "2", "--degree", "5", "--tau-bar", "2.7"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["--json-errors", "betti", "--genus", "2", "--degree", "4", "--tau-bar", "21/10"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "validation");
    let out = run(&["stability", "validate", "--genus", "2", "--degree", "5", "--tau-bar", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);
    let out = run(&["betti", "--genus", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn strata_csv_lists_descriptors() {
    let out = run(&["strata", "--genus", "2", "--degree", "5", "--tau-bar", "27/10", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "d,n1,n2,index,dim\n3,1,2,4,3\n");
}

fn model(d_l: i64) -> PathBuf {
    let path = scratch(&format!("model_dl{d_l}.json"));
    let text = format!(
        r#"{{"g": 2, "k": 5, "dL": {d_l}, "psi_nonzero": true, "theta_zero": false, "s_placement": "in_Lc", "tau_bar": "27/10"}}"#
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn stability_check_reports_witness() {
    let out = run(&["stability", "check", "--model", model(2).to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["stable"], false);
    assert_eq!(v["witness"]["subbundle"], "Lc");
    assert_eq!(v["witness"]["condition"], 2);
    assert_eq!(v["witness"]["slope"], "2");

    let out = run(&["stability", "check", "--model", model(3).to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json(&out)["stable"], true);
    assert_eq!(json(&out)["witness"], Value::Null);
}

#[test]
fn malformed_model_is_rejected() {
    let path = scratch("model_bad.json");
    std::fs::write(&path, r#"{"g": 2, "k": 5, "dL": 3, "psi_nonzero": true, "theta_zero": true, "s_placement": "in_Lc", "tau_bar": "27/10"}"#).unwrap();
    assert_eq!(run(&["stability", "check", "--model", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn negative_tau_reports_obstruction() {
    let out = run(&["vortex", "solve", "--rank1", "1", "--grid", "8", "--tau", "-1", "--max-iter", "100"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["converged"], false);
    assert!(v["note"].as_str().unwrap().starts_with("obstructed"));
    assert!(v["residual"].as_f64().unwrap() >= v["trace_floor"].as_f64().unwrap() * (1.0 - 1e-9));
}

#[test]
fn positive_tau_converges_and_dumps_fields() {
    let dump = scratch("fields.bin");
    let res = scratch("result.json");
    let out = run(&[
        "vortex", "solve", "--grid", "8", "--tau", "1", "--seed", "5",
        "--dump-fields", dump.to_str().unwrap(), "--out", res.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["converged"], true);
    assert_eq!(v["note"], Value::Null);
    assert_eq!(std::fs::read(&res).unwrap(), out.stdout);

    let bytes = std::fs::read(&dump).unwrap();
    assert_eq!(&bytes[..4], b"HPVF");
    let word = |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap());
    assert_eq!((word(0), word(1), word(2), word(3), word(4)), (1, 8, 1, 1, 8));
    // Eight 1×1 fields: names, shapes, then 64 sites of (re, im) each.
    let names: usize = ["A1x", "A1y", "A2x", "A2y", "theta1", "theta2", "phi", "psi"].iter().map(|n| 1 + n.len() + 8).sum();
    assert_eq!(bytes.len(), 24 + names + 8 * 64 * 16);
}

#[test]
fn selftest_passes_and_is_reproducible() {
    let a = run(&["selftest", "--seed", "3"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, run(&["selftest", "--seed", "3"]).stdout);
}

#[test]
fn selftest_catches_injected_fault() {
    let out = run(&["selftest", "--inject-fault", "deviation-sign-flip"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    for g in v["groups"].as_array().unwrap() {
        assert_eq!(g["pass"], g["name"] != "decomposition", "{g}");
    }
}

#[test]
fn help_documents_flags() {
    let out = run(&["vortex", "solve", "--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for flag in ["--rank1", "--rank2", "--grid", "--vol", "--tau", "--tol", "--max-iter", "--seed", "--branch", "--out", "--dump-fields"] {
        assert!(text.contains(flag), "{flag} missing from help");
    }
}

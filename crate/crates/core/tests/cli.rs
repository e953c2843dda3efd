//! The `x0maps` binary against the bundled data.

use serde_json::Value;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_x0maps")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn genus_rows_and_usage_errors() {
    let (code, out, _) = run(&["genus", "223", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "N,psi,nu2,nu3,nu_inf,g0,g0_plus\n223,224,0,2,2,18,6\n");
    let (code, out, _) = run(&["genus", "1..20", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 21);
    assert_eq!(run(&["genus", "0"]).0, 3);
    assert_eq!(run(&["genus", "12", "--format", "xml"]).0, 3);
    assert_eq!(run(&["frobnicate"]).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn residual_row_for_227() {
    let (code, out, err) = run(&["classify-morphisms", "227", "--offline", "--show-residual", "--format", "csv"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.ends_with("227,19,5,2,14,18\n"), "{out}");
    assert!(out.contains("only-quotient-map"));
}

#[test]
fn missing_kernel_data_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("kernels.jsonl");
    std::fs::write(&empty, "").unwrap();
    let (code, _, err) =
        run(&["classify-morphisms", "223", "--offline", "--kernel-data", empty.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("223.2.a.b"), "{err}");
    let (code, _, _) = run(&["classify-morphisms", "10007", "--offline"]);
    assert_eq!(code, 2);
}

fn degree_json(range: &str) -> Vec<Value> {
    let (code, out, err) = run(&["classify-degree", range, "--offline", "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn degree_six_examples() {
    let v = degree_json("197");
    assert_eq!(v[0]["status"], "Finite");
    assert_eq!(v[0]["evidence"][0]["rule_id"], "Certificate");
    let v = degree_json("193");
    assert_eq!(v[0]["status"], "Finite");
    assert_eq!(v[0]["evidence"][0]["rule_id"], "DFMinimality");
    let v = degree_json("157..199");
    let rule = |p: u64| {
        let x = v.iter().find(|x| x["level"] == p).unwrap();
        (x["status"].as_str().unwrap().to_string(), x["evidence"][0]["rule_id"].as_str().unwrap().to_string())
    };
    for p in [157, 173, 199] {
        assert_eq!(rule(p), ("Finite".into(), "RankFilter".into()), "p = {p}");
    }
    assert_eq!(rule(163), ("Infinite".into(), "PlusCubicPullback".into()));
    assert_eq!(rule(179).0, "Infinite");
    let v = degree_json("211");
    assert_eq!(v[0]["evidence"][0]["rule_id"], "KVGate");
    let v = degree_json("701");
    assert_eq!(v[0]["evidence"][0]["rule_id"], "OggThreshold");
}

#[test]
fn theorem17_check_and_degree_limits() {
    let (code, _, err) = run(&["classify-degree", "2..2999", "--offline", "--expect-theorem17", "--jobs", "2"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(run(&["classify-degree", "163", "--degree", "7", "--offline"]).0, 3);
    let (code, out, _) = run(&["classify-degree", "59", "--degree", "2", "--offline", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.contains("59,2,Infinite,KnownTable"));
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["classify-degree", "2..700", "--offline", "--format", "json", "--jobs", "1"]);
    let b = run(&["classify-degree", "2..700", "--offline", "--format", "json", "--jobs", "3"]);
    assert_eq!(a, b);
    let a = run(&["classify-morphisms", "2..500", "--offline", "--show-residual"]);
    let b = run(&["classify-morphisms", "2..500", "--offline", "--show-residual"]);
    assert_eq!(a, b);
}

#[test]
fn decomposition_stats_output() {
    let (code, out, _) = run(&["thm13-stats", "2..100", "--offline", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    let (code, out, _) = run(&["thm13-stats", "24..28", "--offline", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "count,total,percentage\n0,0,0.00\n");
}

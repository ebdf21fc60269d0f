use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn schur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schur")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = schur(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn kl_computations(out: &Output) -> usize {
    let err = String::from_utf8_lossy(&out.stderr);
    let line = err.lines().find_map(|l| l.strip_prefix("kl_computations: ")).expect("stats line");
    line.trim().parse().unwrap()
}

#[test]
fn kl_of_a_generator() {
    let out = schur(&["--type", "A2", "kl", "--w", "s1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "H_s1 + v*H_e");
}

#[test]
fn cosets_in_a2() {
    let v = json(&["--type", "A2", "cosets", "--I", "s1", "--J", "s2"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let sizes: Vec<u64> = rows.iter().map(|r| r["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [4, 2]);
    assert_eq!(rows[1]["p_min"], "s2.s1");
    assert_eq!(rows[1]["kilmoyer"], serde_json::json!(["s1"]));
}

#[test]
fn star_through_the_empty_set() {
    // M^{s,∅} *_∅ M^{∅,s} = (v + v^-1) M^{s,s}
    let v = json(&["--type", "A2", "schur-mult", "--I", "s1", "--J", "", "--K", "s1", "--p", "e", "--q", "e"]);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["coeff"], serde_json::json!({"-1": 1, "1": 1}));
}

#[test]
fn char_decomposition_is_a_single_kl_element() {
    let v = json(&["--type", "A2", "char", "--chain", "{},{s1},{},{s2},{}", "--decompose"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["p"], "s1.s2");
    assert_eq!(rows[0]["coeff"], serde_json::json!({"0": 1}));
}

#[test]
fn phi_degrees() {
    let v = json(&["--type", "A2", "phi", "--I", "s1", "--J", "s2", "--p", "s2.s1"]);
    let degrees: Vec<u64> = v["basis"].as_array().unwrap().iter().map(|b| b["degree"].as_u64().unwrap()).collect();
    assert_eq!(degrees, [2, 0]);
}

#[test]
fn verify_passes_on_a2() {
    let out = schur(&["--type", "A2", "verify", "--suite", "all", "--cap", "4", "--triples", "20"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["--type", "A2", "kl", "--w", "s9"][..],
        &["--spec", r#"{"bogus":1}"#, "kl", "--w", "e"],
        &["--type", "A2", "verify", "--suite", "nope"],
        &["--type", "A2", "invariants", "--I", "s1", "--p", "e", "--cap", "3"],
        &["--type", "A2", "char", "--chain", "{s1},{s2}"],
        &["--type", "A2", "kl"],
    ] {
        let out = schur(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn io_failure_exits_1() {
    let out = schur(&["--type", "A2", "--cache=/nonexistent/dir/k.json", "kl", "--w", "s1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["--type", "B3", "--format", "json", "kl", "--all"];
    let a = schur(&args);
    let b = schur(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cache_round_trip_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kl.json");
    let flag = format!("--cache={}", path.display());
    let run = |ty: &str| schur(&["--type", ty, &flag, "--stats", "kl", "--all"]);

    let first = run("A3");
    assert_eq!(code(&first), 0);
    assert!(kl_computations(&first) > 0);
    let bytes = std::fs::read(&path).unwrap();

    let second = run("A3");
    assert_eq!(code(&second), 0);
    assert_eq!(kl_computations(&second), 0);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read(&path).unwrap(), bytes);

    let other = run("B2");
    assert_eq!(code(&other), 3);
    assert_eq!(std::fs::read(&path).unwrap(), bytes);
    assert!(leftovers(dir.path()).is_empty());
}

fn leftovers(dir: &Path) -> Vec<String> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.contains(".tmp"))
        .collect()
}

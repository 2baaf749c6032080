use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn superroot(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superroot")).args(args).current_dir(dir).output().expect("binary runs")
}

fn json_report(dir: &Path, args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--json", "-"]);
    let out = superroot(dir, &a);
    let v = serde_json::from_slice(&out.stdout).expect("report is JSON");
    (out.status.code().unwrap(), v)
}

fn labels(report: &Value) -> Vec<String> {
    report["checks"].as_array().unwrap().iter().map(|c| c["label"].as_str().unwrap().to_owned()).collect()
}

#[test]
fn osp_build_reports_dims() {
    let dir = tempdir().unwrap();
    let (code, r) = json_report(dir.path(), &["osp", "build", "-m", "2", "-n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["result"]["dims"]["g"], 40);
    assert_eq!(r["result"]["dims"]["u"], 9);
    assert_eq!(r["seed"], 0);
    assert!(r.get("timing_ms").is_none());
}

#[test]
fn bc2_check_lists_axioms_by_label() {
    let dir = tempdir().unwrap();
    let (code, r) = json_report(dir.path(), &["roots", "check", "--type", "BC", "--rank", "2"]);
    assert_eq!(code, 0);
    let l = labels(&r);
    for s in ["S1", "S2", "S3", "S4", "S5"] {
        assert!(l.iter().any(|x| x.starts_with(s)), "{s} missing from {l:?}");
    }
}

#[test]
fn graded_jacobi_on_emitted_trivial_data_is_exhaustive() {
    let dir = tempdir().unwrap();
    let p = dir.path();
    assert!(superroot(p, &["graded", "emit-data", "--name", "trivial", "--out", "trivial.json"]).status.success());
    let (code, r) = json_report(p, &["graded", "jacobi", "--data", "trivial.json", "-m", "2", "-n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["checks"][0]["checked"], 64000);
    let input = &r["inputs"][0];
    assert_eq!(input["path"], "trivial.json");
    assert_eq!(input["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn span_table_discrepancy_exits_one() {
    let dir = tempdir().unwrap();
    let (code, r) = json_report(dir.path(), &["osp", "table", "-m", "2", "-n", "2"]);
    assert_eq!(code, 1);
    assert_eq!(r["verdict"], "fail");
    let failing: Vec<_> = r["checks"].as_array().unwrap().iter().filter(|c| c["pass"] == false).collect();
    assert!(failing.iter().any(|c| c["label"].as_str().unwrap().contains("d_p+d_q")));
}

#[test]
fn broken_involution_is_a_math_failure() {
    let dir = tempdir().unwrap();
    let (code, r) = json_report(dir.path(), &["graded", "verify-data", "--data", "broken-involution", "-m", "1", "-n", "1"]);
    assert_eq!(code, 1);
    assert_eq!(r["verdict"], "fail");
}

#[test]
fn malformed_json_exits_two_with_location() {
    let dir = tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("bad.json"), "{\"roots\": [1, }").unwrap();
    let out = superroot(p, &["roots", "check", "--input", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.json") && err.contains("line 1 column"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_input_and_bad_flags_exit_two() {
    let dir = tempdir().unwrap();
    let p = dir.path();
    assert_eq!(superroot(p, &["eals", "check", "--input", "nope.json"]).status.code(), Some(2));
    assert_eq!(superroot(p, &["osp", "build", "-m", "0", "-n", "2"]).status.code(), Some(2));
    assert_eq!(superroot(p, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(superroot(p, &["osp", "jacobi", "-m", "1", "-n", "1", "--exhaustive", "--sampled", "5"]).status.code(), Some(2));
    assert_eq!(superroot(p, &["--help"]).status.code(), Some(0));
}

#[test]
fn json_path_writes_file_and_keeps_text_on_stdout() {
    let dir = tempdir().unwrap();
    let p = dir.path();
    let out = superroot(p, &["osp", "casimir", "-m", "1", "-n", "1", "--json", "rep.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!out.stdout.is_empty() && out.stdout[0] != b'{');
    let r: Value = serde_json::from_slice(&std::fs::read(p.join("rep.json")).unwrap()).unwrap();
    assert_eq!(r["verdict"], "pass");
    assert!(r["command"].as_str().unwrap().contains("casimir"));
    assert!(!r["command"].as_str().unwrap().contains("rep.json"));
}

#[test]
fn timing_is_opt_in() {
    let dir = tempdir().unwrap();
    let (_, r) = json_report(dir.path(), &["osp", "casimir", "-m", "1", "-n", "1", "--timing"]);
    assert!(r["timing_ms"].is_u64());
}

#[test]
fn affinize_then_core_against_base() {
    let dir = tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("g.json"), r#"{"m": 1, "n": 1}"#).unwrap();
    let out = superroot(p, &["eals", "affinize", "--base", "g.json", "--lambda-window", "1", "--out", "L.json"]);
    assert_eq!(out.status.code(), Some(0));
    let (code, r) = json_report(p, &["eals", "core", "--input", "L.json", "--base", "g.json", "--lambda-window", "1"]);
    assert_eq!(code, 0, "{r:#}");
    assert_eq!(r["result"]["center"].as_array().unwrap().len(), 1);
}

#[test]
fn repn_sample_recovers_its_tags() {
    let dir = tempdir().unwrap();
    let p = dir.path();
    let (code, r) = json_report(p, &["repn", "sample", "-m", "2", "-n", "2", "--seed", "7", "--out", "m.json"]);
    assert_eq!(code, 0);
    assert_eq!(r["seed"], 7);
    let (code, _) = json_report(p, &["repn", "decompose", "--input", "m.json", "-m", "2", "-n", "2"]);
    assert_eq!(code, 0);
}

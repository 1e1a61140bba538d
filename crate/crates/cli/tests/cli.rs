use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kamp::kripke::Model;
use kamp::sequent::{derivation_from_str, derivation_to_string};
use num_traits::Signed;

fn kamp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kamp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decide_valid_and_invalid() {
    let o = kamp(&["decide", "[](p -> q) -> ([]p -> []q)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "VALID\n");

    let o = kamp(&["decide", "[](p \\/ q) -> ([]p \\/ []q)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("INVALID"));
}

#[test]
fn countermodel_file_refutes() {
    let dir = tempfile::tempdir().unwrap();
    let cm = dir.path().join("cm.json");
    let f = "[](p \\/ q) -> ([]p \\/ []q)";
    let o = kamp(&["decide", f, "--countermodel", path_str(&cm)]);
    assert_eq!(o.status.code(), Some(1));
    let m = Model::from_json_str(&fs::read_to_string(&cm).unwrap()).unwrap();
    let parsed = kamp::parse_formula(f, kamp::Dialect::KA).unwrap();
    assert!(m.eval(&parsed, "w1").unwrap().is_negative());
}

#[test]
fn certificate_file_lists_branches() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let o = kamp(&["decide", "[]p -> [](p /\\ p)", "--certificate", path_str(&cert)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    let branches = v.as_array().unwrap();
    assert!(!branches.is_empty());
    for b in branches {
        assert!(b["system"].is_array());
        assert!(b["multipliers"].is_object());
    }
}

#[test]
fn trace_prints_lines() {
    let o = kamp(&["decide", "--trace", "p -> p"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().count() > 1);
    assert!(out.ends_with("VALID\n"));
}

#[test]
fn dialect_modes() {
    let o = kamp(&["decide", "--dialect", "kac", "c -> []c"]);
    assert_eq!(o.status.code(), Some(1));
    let o = kamp(&["decide", "--dialect", "kac", "--mode", "serial", "c -> []c"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("overrides"));
    let o = kamp(&["decide", "--dialect", "kl", "--mode", "serial", "p"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn parse_errors_exit_2() {
    let o = kamp(&["decide", "p ->"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kamp(&["prove-seq", "p /\\ q |- p"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn prove_seq_matches_golden_file() {
    let o = kamp(&["prove-seq", "|- [](p & p) -> ([]p & []p)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), fs::read_to_string(fixture("doubled_box.json")).unwrap());
}

#[test]
fn prove_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("proof.json");
    let o = kamp(&["prove-seq", "[]p, [](p -> q) |- []q", "-o", path_str(&proof)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "PROVED\n");
    let o = kamp(&["check-proof", "--no-cut", path_str(&proof)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("OK"));
}

#[test]
fn prove_seq_refutes() {
    let dir = tempfile::tempdir().unwrap();
    let cm = dir.path().join("cm.json");
    let o = kamp(&["prove-seq", "[]q, []p |- []p & []p", "--countermodel", path_str(&cm)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(Model::from_json_str(&fs::read_to_string(&cm).unwrap()).is_ok());
}

#[test]
fn golden_proof_checks() {
    let o = kamp(&["check-proof", "--no-cut", path_str(&fixture("doubled_box.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK |- ([](p & p) -> ([]p & []p))\n");
}

#[test]
fn corrupted_proof_is_located() {
    let text = fs::read_to_string(fixture("doubled_box.json")).unwrap();
    let bad = text.replacen("\"conclusion\": \"[](p & p) |- []p, []p\"", "\"conclusion\": \"[](p & p) |- []p, []q\"", 1);
    assert_ne!(bad, text);
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("bad.json");
    fs::write(&proof, bad).unwrap();
    let o = kamp(&["check-proof", path_str(&proof)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("rule violation at [0"));
}

#[test]
fn cut_is_rejected_without_cut_rule() {
    let o = kamp(&["check-proof", "--no-cut", path_str(&fixture("trivial_cut.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "rule violation at []: rule cut is not permitted here\n");
    let o = kamp(&["check-proof", path_str(&fixture("trivial_cut.json"))]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn cut_elim_removes_cut() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = kamp(&["cut-elim", path_str(&fixture("trivial_cut.json")), "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK p |- p\n");
    let d = derivation_from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(d.conclusion.to_string(), "p |- p");
    assert!(!derivation_to_string(&d).contains("\"cut\""));
    let o = kamp(&["check-proof", "--no-cut", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn malformed_proof_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("junk.json");
    fs::write(&proof, "{\"rule\": \"nonsense\"}").unwrap();
    assert_eq!(kamp(&["check-proof", path_str(&proof)]).status.code(), Some(2));
    assert_eq!(kamp(&["check-proof", "/nonexistent/proof.json"]).status.code(), Some(2));
}

#[test]
fn translate_prints_star() {
    let o = kamp(&["translate", "!p"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(((p /\\ 0) \\/ (c /\\ ~c)) -> (c /\\ ~c))\n");
}

#[test]
fn translate_decides() {
    let o = kamp(&["translate", "--decide", "[](p => q) => ([]p => []q)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("VALID\n"));

    let dir = tempfile::tempdir().unwrap();
    let cm = dir.path().join("cm.json");
    let o = kamp(&["translate", "--decide", "p (+) p => p", "--countermodel", path_str(&cm)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("value at w1: 1/2"));
    assert!(fs::read_to_string(&cm).unwrap().contains("w1"));
}

#[test]
fn fuzz_is_deterministic() {
    for suite in ["soundness", "agreement", "cut", "shift"] {
        let a = kamp(&["fuzz", "--suite", suite, "--iters", "20", "--seed", "11"]);
        let b = kamp(&["fuzz", "--suite", suite, "--iters", "20", "--seed", "11"]);
        assert_eq!(a.status.code(), Some(0), "{suite}");
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(stdout(&a), format!("suite {suite}: 20 trials, seed 11, 0 violations\n"));
    }
}

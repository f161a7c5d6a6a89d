//! End-to-end checks of the `lambek` binary: exit codes, output shapes,
//! and the prove → check / translate → check pipelines.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn lambek(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_lambek"))
        .args(args)
        .output()
        .expect("spawn lambek");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../lambek-core/tests/fixtures")
        .join(name);
    p.to_str().expect("utf-8 path").to_string()
}

/// A scratch file that cleans up after itself.
struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str, contents: &str) -> Scratch {
        let p = std::env::temp_dir().join(format!("lambek-cli-{}-{name}", std::process::id()));
        std::fs::write(&p, contents).expect("write scratch file");
        Scratch(p)
    }

    fn path(&self) -> &str {
        self.0.to_str().expect("utf-8 path")
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

#[test]
fn prove_provable_sequent_exits_zero() {
    let r = lambek(&["prove", "(a/b, b) |- a"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("(a/b, b) |- a"), "stdout: {}", r.stdout);
    assert!(r.stdout.contains("[LeftSlash]"), "stdout: {}", r.stdout);
}

#[test]
fn prove_unprovable_sequent_exits_one() {
    let r = lambek(&["prove", "a |- b"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.trim(), "no proof");
}

#[test]
fn prove_extension_changes_the_answer() {
    // Associativity is exactly what separates L from NL here.
    let s = "((a, b), c) |- a.(b.c)";
    assert_eq!(lambek(&["prove", s, "--ext", "NL"]).code, 1);
    assert_eq!(lambek(&["prove", s, "--ext", "L"]).code, 0);
}

#[test]
fn prove_rejects_bad_syntax() {
    let r = lambek(&["prove", "a |-"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("error"), "stderr: {}", r.stderr);
}

#[test]
fn prove_rejects_unknown_extension() {
    let r = lambek(&["prove", "a |- a", "--ext", "XYZ"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("XYZ"), "stderr: {}", r.stderr);
}

#[test]
fn prove_json_output_passes_check() {
    let r = lambek(&["prove", "(S/(S/np), (S/inf, inf/np)) |- S", "--ext", "L", "--format", "json"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let f = Scratch::new("proof.json", &r.stdout);
    let c = lambek(&["check", f.path()]);
    assert_eq!(c.code, 0, "stdout: {} stderr: {}", c.stdout, c.stderr);
    assert_eq!(c.stdout.trim(), "ok");
}

#[test]
fn prove_enumerates_distinct_solutions() {
    let r = lambek(&[
        "prove",
        "((a, a\\a), a\\a) |- a",
        "--max-solutions",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).expect("json output");
    let proofs = v.as_array().expect("array of proofs");
    assert_eq!(proofs.len(), 2, "elimination order gives exactly two derivations");
    assert_ne!(proofs[0], proofs[1]);
}

#[test]
fn check_accepts_the_stored_derivation() {
    let r = lambek(&["check", &fixture("r_final.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.trim(), "ok");
}

#[test]
fn check_rejects_a_corrupted_derivation() {
    let text = std::fs::read_to_string(fixture("r_final.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["der"]["seq"]["succ"] = Value::String("np".into());
    let f = Scratch::new("corrupt.json", &v.to_string());
    let r = lambek(&["check", f.path()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("invalid:"), "stdout: {}", r.stdout);
}

#[test]
fn check_rejects_a_truncated_file() {
    let f = Scratch::new("truncated.json", "{ \"der\": { \"seq\":");
    let r = lambek(&["check", f.path()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("parsing"), "stderr: {}", r.stderr);
}

#[test]
fn check_reports_a_missing_file() {
    let r = lambek(&["check", "/nonexistent/proof.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("reading"), "stderr: {}", r.stderr);
}

#[test]
fn parse_finds_the_object_question_reading() {
    let r = lambek(&[
        "parse",
        "cosa guarda passare",
        "--lexicon",
        &fixture("italian.lex"),
        "--goal",
        "S",
        "--ext",
        "L",
    ]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("(cosa (guarda passare))"), "stdout: {}", r.stdout);
    assert!(r.stdout.contains("cosa: S/(S/np)"), "stdout: {}", r.stdout);
}

#[test]
fn parse_without_a_reading_exits_one() {
    let r = lambek(&[
        "parse",
        "cosa guarda passare",
        "--lexicon",
        &fixture("italian.lex"),
        "--goal",
        "S",
        "--ext",
        "NL",
    ]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.trim(), "no parse");
}

#[test]
fn parse_names_an_unknown_word() {
    let r = lambek(&[
        "parse",
        "cosa zorp",
        "--lexicon",
        &fixture("italian.lex"),
        "--goal",
        "S",
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("zorp"), "stderr: {}", r.stderr);
}

#[test]
fn translated_arrow_proof_passes_check() {
    let t = lambek(&[
        "translate",
        &fixture("r_final.json"),
        "--from",
        "gentzen",
        "--to",
        "arrow",
        "--format",
        "json",
    ]);
    assert_eq!(t.code, 0, "stderr: {}", t.stderr);
    let f = Scratch::new("arrow.json", &t.stdout);
    let c = lambek(&["check", f.path(), "--system", "arrow"]);
    assert_eq!(c.code, 0, "stdout: {} stderr: {}", c.stdout, c.stderr);
}

#[test]
fn translated_natded_proof_passes_check() {
    use lambek_core::{natded_to_json, Extension, Form, NatDedNode, NatDedProof, NatRule, Term};

    let a = Form::at("a");
    let b = Form::at("b");
    let fun = Form::slash(a.clone(), b.clone());
    let root = NatDedNode::new(
        Term::comma(Term::one(fun.clone()), Term::one(b.clone())),
        a,
        NatRule::SlashElim { b: b.clone() },
        vec![
            NatDedNode::new(Term::one(fun.clone()), fun, NatRule::NatAxiom, Vec::new()),
            NatDedNode::new(Term::one(b.clone()), b, NatRule::NatAxiom, Vec::new()),
        ],
    );
    let proof = NatDedProof { ext: Extension::builtin("NL").unwrap(), root };

    let f = Scratch::new("natded.json", &natded_to_json(&proof).to_string());
    let t = lambek(&["translate", f.path(), "--from", "natded", "--to", "gentzen", "--format", "json"]);
    assert_eq!(t.code, 0, "stderr: {}", t.stderr);
    let g = Scratch::new("natded-gentzen.json", &t.stdout);
    let c = lambek(&["check", g.path()]);
    assert_eq!(c.code, 0, "stdout: {} stderr: {}", c.stdout, c.stderr);
}

#[test]
fn render_latex_emits_one_inference_per_node() {
    let r = lambek(&["render", &fixture("r_final.json"), "--format", "latex"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("\\begin{prooftree}"));
    assert!(r.stdout.contains("\\end{prooftree}"));

    fn nodes(v: &Value) -> (usize, usize, usize) {
        let der = &v["der"];
        let children = der["children"].as_array().expect("children");
        let mut counts = match children.len() {
            0 => (1, 0, 0),
            1 => (0, 1, 0),
            2 => (0, 0, 1),
            n => panic!("unexpected arity {n}"),
        };
        for c in children {
            let (a, u, b) = nodes(c);
            counts = (counts.0 + a, counts.1 + u, counts.2 + b);
        }
        counts
    }
    let text = std::fs::read_to_string(fixture("r_final.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let (leaves, unary, binary) = nodes(&v);
    assert_eq!(r.stdout.matches("\\AxiomC").count(), leaves);
    assert_eq!(r.stdout.matches("\\UnaryInfC").count(), unary);
    assert_eq!(r.stdout.matches("\\BinaryInfC").count(), binary);
}

#[test]
fn oracle_agrees_with_prove_on_both_answers() {
    let yes = lambek(&["oracle", "(a/b, b) |- a"]);
    assert_eq!(yes.code, 0);
    assert_eq!(yes.stdout.trim(), "provable");

    let no = lambek(&["oracle", "a |- b"]);
    assert_eq!(no.code, 1);
    assert!(no.stdout.contains("not provable"), "stdout: {}", no.stdout);
}

#[test]
fn diagnostics_appear_only_when_requested() {
    let quiet = lambek(&["prove", "(a/b, b) |- a"]);
    assert!(quiet.stderr.is_empty(), "stderr: {}", quiet.stderr);

    let noisy = Command::new(env!("CARGO_BIN_EXE_lambek"))
        .args(["prove", "(a/b, b) |- a"])
        .env("LAMBEK_LOG", "1")
        .output()
        .expect("spawn lambek");
    let stderr = String::from_utf8(noisy.stderr).unwrap();
    assert!(stderr.contains("expansions"), "stderr: {stderr}");
}

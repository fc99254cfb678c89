use std::path::PathBuf;
use std::process::{Command, Output};

fn pie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pie"))
        .args(args)
        .env_remove("PIE_TIMEOUT_MS")
        .output()
        .expect("running pie")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn elim_prints_text_result() {
    let o = pie(&["elim", "ex2(p, (all(x,(q(x)->p(x))), all(x,(p(x)->r(x)))))"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "all(x, (q(x)->r(x)))");
}

#[test]
fn elim_failure_exits_one() {
    let o = pie(&["elim", "ex2(p, all(x, (p(x) -> p(f(x)))))"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("elimination failed"));
}

#[test]
fn valid_verdicts_and_exit_codes() {
    let o = pie(&["valid", "p"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("not valid"), "{}", stdout(&o));
    assert!(stdout(&o).contains("countermodel"));
    let o = pie(&[
        "valid",
        "(kb1, (rained_last_night ; sprinkler_was_on)) -> wet(shoes)",
        "--doc",
        &fixture("kb1.pie"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid");
}

#[test]
fn parse_and_usage_errors_exit_two() {
    assert_eq!(pie(&["elim", "p(a"]).status.code(), Some(2));
    assert_eq!(pie(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        pie(&["process", "/nonexistent/doc.pie"]).status.code(),
        Some(2)
    );
    assert_eq!(pie(&["ipol", "p"]).status.code(), Some(2));
}

#[test]
fn ipol_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("t.dot");
    let o = pie(&["ipol", "(p, q) -> (p ; r)", "--dot", dot.to_str().unwrap()]);
    assert_eq!(stdout(&o), "p");
    assert!(std::fs::read_to_string(&dot)
        .unwrap()
        .starts_with("digraph tableau {"));
}

#[test]
fn expand_with_document_macros() {
    let o = pie(&[
        "expand",
        "explanation(kb1, [wet], wet(shoes))",
        "--doc",
        &fixture("kb1.pie"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("all2(wet, "), "{}", stdout(&o));
}

#[test]
fn tptp_and_dimacs() {
    assert_eq!(
        stdout(&pie(&["tptp", "all(x, (p(x) -> q(x)))"])),
        "fof(f, conjecture, ! [X] : (p(X) => q(X)))."
    );
    let d = stdout(&pie(&["dimacs", "(p ; q), ~p"]));
    assert!(d.contains("p cnf 2 2"), "{d}");
}

#[test]
fn process_writes_latex_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.tex");
    let o = pie(&["process", &fixture("kb1.pie"), "-o", out.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let tex = std::fs::read_to_string(&out).unwrap();
    assert!(tex.starts_with("\\documentclass"));
    assert!(tex.contains("\\mathit{kb_{1}}"));
    assert!(tex.contains("Result of elimination:"));
    assert!(tex.contains("is valid."));
}

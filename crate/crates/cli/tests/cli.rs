use std::path::Path;
use std::process::{Command, Output};

use prooftree::auto::{auto_prove, Limits};
use prooftree::persist::{save_proof, serialize};
use prooftree::{parse_sequent, NodePath, ProofTree};

/// Runs with no solver override and no config file.
fn prooftree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prooftree"))
        .args(args)
        .env_remove("PROOFTREE_SOLVER")
        .env_remove("PROOFTREE_CONFIG")
        .env("XDG_CONFIG_HOME", "/nonexistent")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_proof(dir: &Path, name: &str, tree: &ProofTree) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serialize(&save_proof(tree))).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn parse_prints_canonical_text() {
    let o = prooftree(&["parse", "sequent", "p && q -> r |- ~p"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(p ∧ q) ⇒ r ⊢ ¬p\n");
    let o = prooftree(&["parse", "triple", "{x = 1} x := x + 1 {x = 2}"]);
    assert_eq!(stdout(&o), "{x = 1} x := x + 1 {x = 2}\n");
}

#[test]
fn parse_errors_carry_a_position() {
    let o = prooftree(&["parse", "sequent", "p /\\"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 1, column 5"), "{}", stderr(&o));
}

#[test]
fn auto_walkthrough_latex() {
    let o = prooftree(&["auto", "|- p => q => (p /\\ q)", "--latex"]);
    assert_eq!(o.status.code(), Some(0));
    let tree = auto_prove(
        &parse_sequent("|- p => q => (p /\\ q)").unwrap(),
        Limits::default(),
    )
    .tree;
    assert_eq!(stdout(&o), prooftree::latex::to_latex(&tree));
}

#[test]
fn auto_saves_what_it_built() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("amb.ptb.json");
    let f = file.to_str().unwrap();
    let o = prooftree(&["auto", "p => q, p => r, p |- q", "--save", f]);
    assert_eq!(o.status.code(), Some(2));
    let o = prooftree(&["check", f]);
    assert_eq!(
        stdout(&o),
        "ok: p ⇒ q, p ⇒ r, p ⊢ q (incomplete, 1 open goal(s))\n"
    );
    let o = prooftree(&["auto", "|- p => q => (p /\\ q)", "--save", f]);
    assert_eq!(o.status.code(), Some(0));
    let saved = std::fs::read(&file).unwrap();
    let tree = auto_prove(
        &parse_sequent("|- p => q => (p /\\ q)").unwrap(),
        Limits::default(),
    )
    .tree;
    assert_eq!(saved, serialize(&save_proof(&tree)));
}

#[test]
fn auto_stops_on_ambiguity() {
    let o = prooftree(&["auto", "p => q, p => r, p |- q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ImpL"), "{}", stderr(&o));
}

#[test]
fn auto_respects_depth() {
    let o = prooftree(&["auto", "|- p => q => (p /\\ q)", "--max-depth", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("depth limit"));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(prooftree(&[]).status.code(), Some(64));
    assert_eq!(prooftree(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(prooftree(&["auto"]).status.code(), Some(64));
    assert_eq!(prooftree(&["parse", "poem", "p"]).status.code(), Some(64));
    assert_eq!(
        prooftree(&["auto", "|- p", "--max-depth", "many"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(prooftree(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_solver_exits_69() {
    let o = prooftree(&["z3", "p |- p", "--solver", "/nonexistent/z3"]);
    assert_eq!(o.status.code(), Some(69));
    let o = Command::new(env!("CARGO_BIN_EXE_prooftree"))
        .args(["z3", "p |- p"])
        .env("PROOFTREE_SOLVER", "/nonexistent/z3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(69));
}

#[test]
fn solver_flag_beats_environment() {
    let Some(z3) = prooftree_testkit::solver_or_skip("solver_flag_beats_environment") else {
        return;
    };
    let o = Command::new(env!("CARGO_BIN_EXE_prooftree"))
        .args(["z3", "p |- p", "--solver"])
        .arg(&z3.program)
        .env("PROOFTREE_SOLVER", "/nonexistent/z3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn config_file_names_the_solver() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.toml");
    std::fs::write(
        &cfg,
        "solver = \"/nonexistent/from-config\"\ntimeout = 2.5\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_prooftree"))
        .args(["z3", "p |- p"])
        .env_remove("PROOFTREE_SOLVER")
        .env("PROOFTREE_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(69));
    assert!(stderr(&o).contains("from-config"), "{}", stderr(&o));
    std::fs::write(&cfg, "solvr = 1\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_prooftree"))
        .args(["z3", "p |- p"])
        .env_remove("PROOFTREE_SOLVER")
        .env("PROOFTREE_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn z3_verdicts_and_exit_codes() {
    let Some(z3) = prooftree_testkit::solver_or_skip("z3_verdicts_and_exit_codes") else {
        return;
    };
    let z3 = z3.program.to_str().unwrap().to_string();
    let o = prooftree(&["z3", "|- p \\/ q", "--solver", &z3]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "invalid\ncountermodel: p=false q=false\n");
    let o = prooftree(&["z3", "x = 1 |- x + 1 = 2", "--solver", &z3]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid\n");
    let o = prooftree(&[
        "z3",
        "forall x. exists y. forall z. f(x, y) < f(z, g(y, z)) |- exists u. P(u)",
        "--timeout",
        "0.001",
        "--solver",
        &z3,
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o), "unknown (timeout)\n");
}

#[test]
fn check_and_latex_files() {
    let dir = tempfile::tempdir().unwrap();
    let tree = auto_prove(
        &parse_sequent("|- p => q => (p /\\ q)").unwrap(),
        Limits::default(),
    )
    .tree;
    let good = write_proof(dir.path(), "good.ptb.json", &tree);
    let o = prooftree(&["check", &good]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("ok: ⊢ p ⇒ q ⇒ (p ∧ q) (complete)"));

    let out = dir.path().join("out.tex");
    let o = prooftree(&["latex", &good, "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        prooftree::latex::to_latex(&tree)
    );
    let o = prooftree(&["latex", &good, "--standalone"]);
    assert!(stdout(&o).starts_with("\\documentclass{article}"));

    let text = std::fs::read_to_string(&good)
        .unwrap()
        .replacen("\"AndR\"", "\"OrR\"", 1);
    let bad = dir.path().join("bad.ptb.json");
    std::fs::write(&bad, text).unwrap();
    let o = prooftree(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("step 2"), "{}", stderr(&o));
    assert_eq!(
        prooftree(&["latex", bad.to_str().unwrap()]).status.code(),
        Some(1)
    );
    assert_eq!(
        prooftree(&["check", "/nonexistent/x.ptb.json"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn check_rechecks_pseudo_axioms() {
    let dir = tempfile::tempdir().unwrap();
    let forged = dir.path().join("forged.ptb.json");
    std::fs::write(
        &forged,
        r#"{"version":1,"goalKind":"lk","goalText":"p |- q","steps":[{"path":[],"rule":"Z3Axiom","pseudoAxiom":true}]}"#,
    )
    .unwrap();
    let f = forged.to_str().unwrap();
    let o = prooftree(&["check", f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not rechecked"));
    let o = prooftree(&["check", f, "--recheck-z3", "--solver", "/nonexistent/z3"]);
    assert_eq!(o.status.code(), Some(69));
    if let Some(z3) = prooftree_testkit::solver_or_skip("check_rechecks_pseudo_axioms") {
        let o = prooftree(&[
            "check",
            f,
            "--recheck-z3",
            "--solver",
            z3.program.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(1));
        let t = ProofTree::from_sequent(parse_sequent("x = 1 |- x + 1 = 2").unwrap());
        let (t, _) = prooftree::smt::apply_z3_axiom(
            &t,
            &NodePath::root(),
            &prooftree::smt::Solver::new(z3.clone()),
        )
        .unwrap();
        let honest = write_proof(dir.path(), "honest.ptb.json", &t);
        let o = prooftree(&[
            "check",
            &honest,
            "--recheck-z3",
            "--solver",
            z3.program.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).contains("rechecked by the solver"));
    }
}

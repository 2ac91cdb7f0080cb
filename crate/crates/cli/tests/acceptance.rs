//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use prooftree::auto::{auto_prove, Limits, Outcome, StuckReason};
use prooftree::hoare::{HoareArgs, HoareRule};
use prooftree::latex::to_latex;
use prooftree::lk::{LkRule, Position, RuleArgs};
use prooftree::persist::{load_proof, save_proof, PersistError};
use prooftree::smt::{apply_z3_axiom, check_validity, SmtVerdict, Solver};
use prooftree::syntax::{alpha_eq, sequent_alpha_eq, triple_alpha_eq};
use prooftree::{
    parse_formula, parse_sequent, parse_term, parse_triple, Args, NodePath, ProofTree, Rule,
};
use prooftree_testkit::latex::{well_formed, FIXED_TREES};
use prooftree_testkit::oracle::{self, TruthTable};
use prooftree_testkit::spelling::{asciify, SWAP_CORPUS};
use prooftree_testkit::tamper::{self, trustworthy};
use prooftree_testkit::{fuzz, gen};
use rand::seq::SliceRandom;
use rand::Rng;

/// What a criterion found: a one-line summary, or the first few problems.
type Verdict = Result<String, Vec<String>>;

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Verdict,
}

fn at(p: &[usize]) -> NodePath {
    NodePath::from(p.to_vec())
}

/// Collects problems, keeping the first few messages.
#[derive(Default)]
struct Problems {
    count: usize,
    shown: Vec<String>,
}

impl Problems {
    fn push(&mut self, msg: String) {
        self.count += 1;
        if self.shown.len() < 5 {
            self.shown.push(msg);
        }
    }

    fn finish(mut self, summary: String) -> Verdict {
        if self.count == 0 {
            Ok(summary)
        } else {
            self.shown
                .insert(0, format!("{} violation(s); {summary}", self.count));
            Err(self.shown)
        }
    }
}

fn preorder(tree: &ProofTree) -> Vec<(NodePath, String, Option<String>)> {
    let mut out = Vec::new();
    tree.visit(&mut NodePath::root(), &mut |p, n| {
        out.push((
            p.clone(),
            n.goal().to_string(),
            n.rule().map(|r| r.name().to_string()),
        ))
    });
    out
}

fn walkthrough() -> Verdict {
    let r = auto_prove(
        &parse_sequent("|- p => q => (p /\\ q)").unwrap(),
        Limits::default(),
    );
    let expected = [
        (&[][..], "|- p => q => (p /\\ q)", "ImpR"),
        (&[0], "p |- q => (p /\\ q)", "ImpR"),
        (&[0, 0], "p, q |- p /\\ q", "AndR"),
        (&[0, 0, 0], "p, q |- p", "Id"),
        (&[0, 0, 1], "p, q |- q", "Id"),
    ];
    let expected: Vec<_> = expected
        .iter()
        .map(|(p, g, r)| {
            (
                at(p),
                parse_sequent(g).unwrap().to_string(),
                Some(r.to_string()),
            )
        })
        .collect();
    let mut problems = Problems::default();
    if r.outcome != Outcome::Completed {
        problems.push(format!("outcome {:?}", r.outcome));
    }
    if r.steps != 5 {
        problems.push(format!("{} steps", r.steps));
    }
    if preorder(&r.tree) != expected {
        problems.push(format!("tree {:?}", preorder(&r.tree)));
    }
    if r.tree.revalidate().is_err() {
        problems.push("tree does not revalidate".into());
    }
    problems.finish("completed with ImpR, ImpR, AndR, Id, Id".into())
}

fn ambiguity() -> Verdict {
    let r = auto_prove(
        &parse_sequent("p => q, p => r, p |- q").unwrap(),
        Limits::default(),
    );
    let expected = Outcome::Stuck {
        path: NodePath::root(),
        reason: StuckReason::Ambiguous {
            rule: LkRule::ImpL,
            candidates: vec![Position::left(0), Position::left(1)],
        },
    };
    let mut problems = Problems::default();
    if r.outcome != expected {
        problems.push(format!("outcome {:?}", r.outcome));
    }
    if r.steps != 0 || !r.tree.is_hole() {
        problems.push(format!("{} rules applied before stopping", r.steps));
    }
    problems.finish("stuck at the root: ImpL on left 0 or left 1".into())
}

fn propositional_suite() -> Verdict {
    let mut rng = gen::rng(0xACCE_0003);
    let mut problems = Problems::default();
    let (mut completed, mut unambiguous) = (0, 0);
    for _ in 0..1000 {
        let goal = gen::prop_sequent(&mut rng, 4, 4, 3);
        let r = auto_prove(&goal, Limits::default());
        let valid = oracle::valid(&goal);
        if r.is_completed() {
            completed += 1;
            if let Err(e) = r.tree.revalidate() {
                problems.push(format!("{goal}: revalidation failed: {e}"));
            }
            if !r.tree.is_complete() {
                problems.push(format!("{goal}: completed with open goals"));
            }
            if !valid {
                problems.push(format!("{goal}: proved but not a tautology"));
            }
        }
        let ambiguous = matches!(
            &r.outcome,
            Outcome::Stuck {
                reason: StuckReason::Ambiguous { .. },
                ..
            }
        );
        if !ambiguous {
            unambiguous += 1;
            if r.is_completed() != valid {
                problems.push(format!("{goal}: valid={valid} but {:?}", r.outcome));
            }
        }
    }
    problems.finish(format!(
        "1000 sequents, {completed} proved, {unambiguous} in the unambiguous fragment"
    ))
}

fn smt_agreement() -> Verdict {
    let Some(config) = prooftree_testkit::solver() else {
        return Err(vec![
            "no SMT solver found (set PROOFTREE_SOLVER or put z3 on PATH)".into(),
        ]);
    };
    let mut rng = gen::rng(0xACCE_0004);
    let mut problems = Problems::default();
    let (mut valid_count, mut models) = (0, 0);
    for _ in 0..300 {
        let goal = gen::prop_sequent(&mut rng, 6, 3, 3);
        let valid = oracle::valid(&goal);
        match check_validity(&goal, &config, Duration::from_secs(10)) {
            Ok(SmtVerdict::Valid) => {
                valid_count += 1;
                if !valid {
                    problems.push(format!("{goal}: solver says valid"));
                }
            }
            Ok(SmtVerdict::Invalid { model }) => {
                models += 1;
                if valid {
                    problems.push(format!("{goal}: solver says invalid"));
                }
                if !oracle::model_falsifies(&model, &goal) {
                    problems.push(format!("{goal}: countermodel {model} does not falsify it"));
                }
            }
            Ok(SmtVerdict::Unknown { reason }) => {
                problems.push(format!("{goal}: unknown ({reason})"))
            }
            Err(e) => problems.push(format!("{goal}: {e}")),
        }
    }
    problems.finish(format!(
        "300 sequents, {valid_count} valid, {models} countermodels checked"
    ))
}

fn consequence_pipeline() -> Verdict {
    let Some(config) = prooftree_testkit::solver() else {
        return Err(vec![
            "no SMT solver found (set PROOFTREE_SOLVER or put z3 on PATH)".into(),
        ]);
    };
    let f = |s: &str| parse_formula(s).unwrap();
    let t = ProofTree::from_triple(parse_triple("{x = 1} x := x + 1 {x = 2}").unwrap());
    let build = || -> Result<ProofTree, String> {
        let t = t
            .apply_at(
                &NodePath::root(),
                Rule::Hoare(HoareRule::HConseq),
                Args::Hoare(HoareArgs::conseq(f("x + 1 = 2"), f("x = 2"))),
            )
            .map_err(|e| e.to_string())?;
        let t = t
            .apply_at(
                &at(&[1]),
                Rule::Hoare(HoareRule::HAssign),
                Args::Hoare(HoareArgs::default()),
            )
            .map_err(|e| e.to_string())?;
        let t = t
            .apply_at(
                &at(&[2]),
                Rule::Lk(LkRule::Id),
                Args::Lk(RuleArgs::default()),
            )
            .map_err(|e| e.to_string())?;
        let (t, verdict) =
            apply_z3_axiom(&t, &at(&[0]), &Solver::new(config)).map_err(|e| e.to_string())?;
        if !verdict.is_valid() {
            return Err(format!("solver verdict {verdict:?}"));
        }
        Ok(t)
    };
    let t = build().map_err(|e| vec![e])?;
    let mut problems = Problems::default();
    let expected = [
        (&[][..], "{x = 1} x := x + 1 {x = 2}", Some("HConseq")),
        (&[0], "x = 1 |- x + 1 = 2", Some("Z3Axiom")),
        (&[1], "{x + 1 = 2} x := x + 1 {x = 2}", Some("HAssign")),
        (&[2], "x = 2 |- x = 2", Some("Id")),
    ];
    let expected: Vec<_> = expected
        .iter()
        .map(|(p, g, r)| {
            let goal = if g.starts_with('{') {
                parse_triple(g).unwrap().to_string()
            } else {
                parse_sequent(g).unwrap().to_string()
            };
            (at(p), goal, r.map(str::to_string))
        })
        .collect();
    if preorder(&t) != expected {
        problems.push(format!("tree {:?}", preorder(&t)));
    }
    if !t.is_complete() {
        problems.push("tree has open goals".into());
    }
    if !t.node(&at(&[0])).unwrap().is_pseudo_axiom() {
        problems.push("the solver closure is not marked".into());
    }
    if let Err(e) = t.revalidate() {
        problems.push(format!("revalidation failed: {e}"));
    }
    problems.finish("complete: HConseq over Z3, HAssign, Id".into())
}

fn surgery() -> Verdict {
    let mut rng = gen::rng(0xACCE_0006);
    let mut problems = Problems::default();
    let (mut prunes, mut detaches) = (0, 0);
    for seq in 0..500 {
        let goal = fuzz::random_goal(&mut rng);
        let mut tree = fuzz::grow(&mut rng, ProofTree::new(goal), 6);
        for op in 0..10 {
            let ctx = format!("sequence {seq} op {op}");
            if rng.gen_bool(0.6) {
                let Some(path) = fuzz::random_hole(&mut rng, &tree) else {
                    continue;
                };
                let goal = tree.node(&path).unwrap().goal().clone();
                let (rule, args) = fuzz::random_rule(&mut rng, &goal);
                let Ok(after) = tree.apply_at(&path, rule, args) else {
                    continue;
                };
                prunes += 1;
                match after.prune_at(&path) {
                    Ok(back) if back == tree => {}
                    other => problems.push(format!("{ctx}: prune after {rule} gave {other:?}")),
                }
                tree = after;
            } else {
                let inner: Vec<NodePath> = fuzz::inner_paths(&tree)
                    .into_iter()
                    .filter(|p| !p.is_root())
                    .collect();
                let Some(path) = inner.choose(&mut rng) else {
                    continue;
                };
                detaches += 1;
                let (rest, sub) = match tree.detach_at(path) {
                    Ok(x) => x,
                    Err(e) => {
                        problems.push(format!("{ctx}: detach {path}: {e}"));
                        continue;
                    }
                };
                if !rest.node(path).is_ok_and(|n| n.is_hole()) {
                    problems.push(format!("{ctx}: detach left no hole at {path}"));
                }
                match rest.attach_at(path, &sub) {
                    Ok(back) if back == tree => {}
                    other => problems.push(format!("{ctx}: attach after detach gave {other:?}")),
                }
                if rng.gen_bool(0.3) {
                    tree = rest;
                }
            }
            if let Err(e) = tree.revalidate() {
                problems.push(format!("{ctx}: tree no longer revalidates: {e}"));
            }
        }
    }
    problems.finish(format!(
        "500 sequences, {prunes} prune-after-apply and {detaches} attach-after-detach checks"
    ))
}

fn tamper_suite() -> Verdict {
    let mut rng = gen::rng(0xACCE_0007);
    let mut problems = Problems::default();
    let (mut accepted, mut rejected) = (0, 0);
    for i in 0..200 {
        let tree = tamper::valid_proof(&mut rng);
        let mut doc = serde_json::to_value(save_proof(&tree)).unwrap();
        let what = tamper::mutate_step(&mut rng, &mut doc);
        match load_proof(&serde_json::to_vec(&doc).unwrap(), Some(&TruthTable)) {
            Ok(t) => {
                accepted += 1;
                if let Err(e) = trustworthy(&t, &doc) {
                    problems.push(format!("mutation {i} ({what}) loaded a bad tree: {e}"));
                }
            }
            Err(PersistError::Replay { .. } | PersistError::HiddenPath(..)) => rejected += 1,
            Err(e) => problems.push(format!("mutation {i} ({what}) failed outside replay: {e}")),
        }
    }
    problems.finish(format!(
        "200 mutations, {accepted} replayed to valid trees, {rejected} rejected"
    ))
}

fn parser_round_trip() -> Verdict {
    let mut rng = gen::rng(0xACCE_0008);
    let mut problems = Problems::default();
    for i in 0..1000 {
        match i % 4 {
            0 | 1 => {
                let f = gen::fo_formula(&mut rng, 6);
                match parse_formula(&f.to_string()) {
                    Ok(back) if alpha_eq(&back, &f) => {}
                    other => problems.push(format!("{f}: {other:?}")),
                }
            }
            2 => {
                let s = gen::fo_sequent(&mut rng, 5, 3);
                match parse_sequent(&s.to_string()) {
                    Ok(back) if sequent_alpha_eq(&back, &s) => {}
                    other => problems.push(format!("{s}: {other:?}")),
                }
            }
            _ => {
                let t = gen::triple(&mut rng, 5, true);
                match parse_triple(&t.to_string()) {
                    Ok(back) if triple_alpha_eq(&back, &t) => {}
                    other => problems.push(format!("{t}: {other:?}")),
                }
            }
        }
    }
    for _ in 0..200 {
        let t = gen::term(&mut rng, 5);
        if parse_term(&t.to_string()).as_ref() != Ok(&t) {
            problems.push(format!("term {t}"));
        }
    }
    let mut swaps = 0;
    for (ascii, unicode) in SWAP_CORPUS {
        swaps += 1;
        if parse_sequent(ascii).ok() != parse_sequent(unicode).ok() || parse_sequent(ascii).is_err()
        {
            problems.push(format!("{ascii} and {unicode} differ"));
        }
    }
    for _ in 0..300 {
        swaps += 1;
        let unicode = gen::fo_sequent(&mut rng, 4, 2).to_string();
        let ascii = asciify(&unicode, &mut rng);
        if parse_sequent(&ascii).ok() != parse_sequent(&unicode).ok() {
            problems.push(format!("{ascii} and {unicode} differ"));
        }
    }
    problems.finish(format!(
        "1000 trees and 200 terms round-trip, {swaps} spelling swaps agree"
    ))
}

fn latex() -> Verdict {
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden");
    let mut problems = Problems::default();
    for (name, build) in FIXED_TREES {
        let text = to_latex(&build());
        let path = golden.join(format!("{name}.tex"));
        match std::fs::read_to_string(&path) {
            Ok(expected) if expected == text => {}
            Ok(_) => problems.push(format!("{name} differs from {}", path.display())),
            Err(e) => problems.push(format!("{}: {e}", path.display())),
        }
        if let Err(e) = well_formed(&text) {
            problems.push(format!("{name}: {e}"));
        }
    }
    let mut rng = gen::rng(0xACCE_0009);
    for i in 0..300 {
        let goal = fuzz::random_goal(&mut rng);
        let tree = fuzz::grow(&mut rng, ProofTree::new(goal), 15);
        if let Err(e) = well_formed(&to_latex(&tree)) {
            problems.push(format!("fuzzed tree {i}: {e}"));
        }
    }
    problems.finish(format!(
        "{} golden files match, 300 fuzzed trees well-formed",
        FIXED_TREES.len()
    ))
}

const CRITERIA: [Criterion; 9] = [
    Criterion {
        name: "walkthrough reproduction",
        limit: Some(Duration::from_millis(100)),
        run: walkthrough,
    },
    Criterion {
        name: "ambiguity stop",
        limit: Some(Duration::from_millis(100)),
        run: ambiguity,
    },
    Criterion {
        name: "propositional soundness and completeness",
        limit: Some(Duration::from_secs(60)),
        run: propositional_suite,
    },
    Criterion {
        name: "SMT oracle agreement",
        limit: Some(Duration::from_secs(300)),
        run: smt_agreement,
    },
    Criterion {
        name: "Hoare consequence pipeline",
        limit: Some(Duration::from_secs(2)),
        run: consequence_pipeline,
    },
    Criterion {
        name: "tree surgery inverse laws",
        limit: None,
        run: surgery,
    },
    Criterion {
        name: "persistence tamper suite",
        limit: None,
        run: tamper_suite,
    },
    Criterion {
        name: "parser round trip",
        limit: None,
        run: parser_round_trip,
    },
    Criterion {
        name: "LaTeX golden files and well-formedness",
        limit: None,
        run: latex,
    },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for (i, c) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let verdict = (c.run)();
        let took = start.elapsed();
        let verdict = match (verdict, c.limit) {
            (Ok(_), Some(limit)) if took > limit => {
                Err(vec![format!("took {took:?}, limit {limit:?}")])
            }
            (v, _) => v,
        };
        let timing = match c.limit {
            Some(limit) => format!("{took:.2?} of {limit:?}"),
            None => format!("{took:.2?}"),
        };
        match verdict {
            Ok(summary) => println!("PASS {} {}: {summary} [{timing}]", i + 1, c.name),
            Err(problems) => {
                failed += 1;
                println!("FAIL {} {}: {} [{timing}]", i + 1, c.name, problems[0]);
                for p in &problems[1..] {
                    println!("    {p}");
                }
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

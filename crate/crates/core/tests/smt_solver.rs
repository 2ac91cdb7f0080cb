//! Against a real solver. Every test skips when none is installed.

use std::sync::atomic::AtomicBool;
use std::time::{Duration, Instant};

use prooftree::parse_sequent;
use prooftree::smt::{
    check_validity, check_validity_with, encode_sequent, SmtError, SmtVerdict, SolverConfig,
    UnknownReason, DEFAULT_TIMEOUT,
};
use prooftree::syntax::Sequent;
use prooftree_testkit::oracle::{self, BoundedArithmetic};
use prooftree_testkit::{gen, solver_or_skip};
use proptest::prelude::*;

fn check(goal: &str, solver: &SolverConfig) -> SmtVerdict {
    check_validity(&parse_sequent(goal).unwrap(), solver, DEFAULT_TIMEOUT).unwrap()
}

#[test]
fn small_goals() {
    let Some(z3) = solver_or_skip("small_goals") else {
        return;
    };
    assert_eq!(check("p |- p", &z3), SmtVerdict::Valid);
    assert_eq!(check("|- p => p", &z3), SmtVerdict::Valid);
    assert_eq!(check("x = 1 |- x + 1 = 2", &z3), SmtVerdict::Valid);
    assert_eq!(check("|- forall x. x < x + 1", &z3), SmtVerdict::Valid);
    let SmtVerdict::Invalid { model } = check("|- p \\/ q", &z3) else {
        panic!("p or q is not valid")
    };
    assert_eq!(model.to_string(), "p=false q=false");
    let SmtVerdict::Invalid { model } = check("x * x = 4 |- x = 2", &z3) else {
        panic!()
    };
    assert_eq!(model.int_vars["x"], -2);
}

#[test]
fn uninterpreted_symbols_come_back_in_the_model() {
    let Some(z3) = solver_or_skip("uninterpreted_symbols_come_back_in_the_model") else {
        return;
    };
    let goal = parse_sequent("f(1) = 2, P(f(1)) |- P(3)").unwrap();
    let SmtVerdict::Invalid { model } = check_validity(&goal, &z3, DEFAULT_TIMEOUT).unwrap() else {
        panic!()
    };
    assert!(model.functions.contains_key("f"));
    assert!(model.functions.contains_key("P"));
    assert_eq!(model.refutes(&goal), Some(true));
}

#[test]
fn reserved_names_are_accepted() {
    let Some(z3) = solver_or_skip("reserved_names_are_accepted") else {
        return;
    };
    let goal = parse_sequent("and, not, ite |- or, distinct").unwrap();
    let script = encode_sequent(&goal).unwrap();
    let SmtVerdict::Invalid { model } = check_validity(&goal, &z3, DEFAULT_TIMEOUT).unwrap() else {
        panic!("{script}")
    };
    assert_eq!(model.bool_atoms.len(), 5, "{model}");
    assert!(model.bool_atoms["and"] && !model.bool_atoms["distinct"]);
    let goal = parse_sequent("assert = 3, get = assert |- get = 3").unwrap();
    assert_eq!(
        check_validity(&goal, &z3, DEFAULT_TIMEOUT).unwrap(),
        SmtVerdict::Valid
    );
}

#[test]
fn tiny_timeout_reports_unknown() {
    let Some(z3) = solver_or_skip("tiny_timeout_reports_unknown") else {
        return;
    };
    let goal =
        parse_sequent("forall x. exists y. forall z. f(x, y) < f(z, g(y, z)) |- exists u. P(u)")
            .unwrap();
    let start = Instant::now();
    let v = check_validity(&goal, &z3, Duration::from_millis(1)).unwrap();
    assert_eq!(
        v,
        SmtVerdict::Unknown {
            reason: UnknownReason::Timeout
        }
    );
    assert!(start.elapsed() < Duration::from_secs(2));
}

#[test]
fn cancellation_kills_the_solver() {
    let Some(z3) = solver_or_skip("cancellation_kills_the_solver") else {
        return;
    };
    let flag = AtomicBool::new(true);
    let v = check_validity_with(
        &parse_sequent("p |- p").unwrap(),
        &z3,
        DEFAULT_TIMEOUT,
        Some(&flag),
    )
    .unwrap();
    assert_eq!(
        v,
        SmtVerdict::Unknown {
            reason: UnknownReason::Cancelled
        }
    );
}

#[test]
fn missing_solver_is_an_error() {
    let cfg = SolverConfig::z3("/nonexistent/z3");
    assert!(matches!(
        check_validity(&parse_sequent("p |- p").unwrap(), &cfg, DEFAULT_TIMEOUT),
        Err(SmtError::SolverNotFound(_))
    ));
}

fn int_env(goal: &Sequent, model: &prooftree::smt::Countermodel) -> oracle::Env {
    goal.free_vars()
        .into_iter()
        .map(|v| {
            let value = model.int_vars.get(&v).copied().unwrap_or(0);
            (v, value)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn propositional_verdicts_match_truth_tables(seed in any::<u64>()) {
        let Some(z3) = prooftree_testkit::solver() else { return Ok(()) };
        let goal = gen::prop_sequent(&mut gen::rng(seed), 6, 3, 3);
        let v = check_validity(&goal, &z3, DEFAULT_TIMEOUT).unwrap();
        match v {
            SmtVerdict::Valid => prop_assert!(oracle::valid(&goal), "{goal}"),
            SmtVerdict::Invalid { model } => {
                prop_assert!(!oracle::valid(&goal));
                prop_assert!(oracle::model_falsifies(&model, &goal), "{model} on {goal}");
            }
            other => prop_assert!(false, "{other} on {goal}"),
        }
    }

    #[test]
    fn arithmetic_verdicts_agree_with_evaluation(seed in any::<u64>()) {
        let Some(z3) = prooftree_testkit::solver() else { return Ok(()) };
        let mut rng = gen::rng(seed);
        let goal = Sequent::new(
            vec![gen::condition(&mut rng, 2)],
            vec![gen::condition(&mut rng, 2)],
        );
        match check_validity(&goal, &z3, DEFAULT_TIMEOUT).unwrap() {
            SmtVerdict::Valid => {
                let bounded = BoundedArithmetic { lo: -3, hi: 3 }.holds_everywhere(&goal);
                prop_assert_eq!(bounded, Some(true), "{}", goal);
            }
            SmtVerdict::Invalid { model } => {
                let env = int_env(&goal, &model);
                prop_assert_eq!(oracle::arith_truth(&goal.left[0], &env), Some(true), "{} {}", goal, model);
                prop_assert_eq!(oracle::arith_truth(&goal.right[0], &env), Some(false), "{} {}", goal, model);
            }
            other => prop_assert!(false, "{other} on {goal}"),
        }
    }

    #[test]
    fn encodings_are_accepted(seed in any::<u64>()) {
        let Some(z3) = prooftree_testkit::solver() else { return Ok(()) };
        let goal = gen::fo_sequent(&mut gen::rng(seed), 3, 2);
        let v = check_validity(&goal, &z3, Duration::from_secs(2)).unwrap();
        let solver_error = matches!(v, SmtVerdict::Unknown { reason: UnknownReason::SolverError(_) });
        prop_assert!(!solver_error, "{v} on {goal}\n{}", encode_sequent(&goal).unwrap());
    }
}

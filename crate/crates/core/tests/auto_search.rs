use std::sync::atomic::AtomicBool;

use prooftree::auto::{auto_at, auto_prove, Limits, Outcome, StuckReason};
use prooftree::lk::{LkRule, Position};
use prooftree::{parse_sequent, NodePath, ProofTree, Rule};
use prooftree_testkit::{fuzz, gen, oracle};
use proptest::prelude::*;

fn rules_preorder(tree: &ProofTree) -> Vec<String> {
    let mut out = Vec::new();
    tree.visit(&mut NodePath::root(), &mut |_, n| {
        if let Some(r) = n.rule() {
            out.push(r.name().to_string())
        }
    });
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn completed_results_are_sound(seed in any::<u64>()) {
        let goal = gen::prop_sequent(&mut gen::rng(seed), 4, 4, 3);
        let r = auto_prove(&goal, Limits::default());
        prop_assert!(r.tree.revalidate().is_ok());
        prop_assert_eq!(r.tree.goal().as_sequent(), Some(&goal));
        if r.is_completed() {
            prop_assert!(r.tree.is_complete());
            prop_assert!(oracle::valid(&goal), "proved invalid {goal}");
        } else {
            prop_assert!(!r.tree.is_complete());
        }
    }

    #[test]
    fn complete_where_never_ambiguous(seed in any::<u64>()) {
        let goal = gen::prop_sequent(&mut gen::rng(seed), 4, 4, 3);
        let r = auto_prove(&goal, Limits::default());
        let ambiguous = matches!(&r.outcome, Outcome::Stuck { reason: StuckReason::Ambiguous { .. }, .. });
        if !ambiguous {
            prop_assert_eq!(r.is_completed(), oracle::valid(&goal), "{}: {:?}", goal, r.outcome);
        }
    }

    #[test]
    fn search_is_deterministic(seed in any::<u64>()) {
        let goal = gen::prop_sequent(&mut gen::rng(seed), 4, 4, 3);
        let a = auto_prove(&goal, Limits::default());
        let b = auto_prove(&goal, Limits::default());
        prop_assert_eq!(a.tree, b.tree);
        prop_assert_eq!(a.outcome, b.outcome);
        prop_assert_eq!(a.steps, b.steps);
    }

    #[test]
    fn steps_are_bounded_by_connectives(seed in any::<u64>()) {
        // each propositional rule removes one connective per branch
        let goal = gen::prop_sequent(&mut gen::rng(seed), 4, 4, 3);
        let r = auto_prove(&goal, Limits::default());
        prop_assert_eq!(r.steps, fuzz::inner_paths(&r.tree).len());
        let depth = fuzz::all_paths(&r.tree).iter().map(|p| p.0.len()).max().unwrap();
        let size: usize = goal.left.iter().chain(&goal.right).map(connectives).sum();
        prop_assert!(depth <= size, "depth {depth} > {size}");
    }

    #[test]
    fn depth_limit_is_respected(seed in any::<u64>(), max in 0usize..4) {
        let goal = gen::prop_sequent(&mut gen::rng(seed), 4, 4, 3);
        let r = auto_prove(&goal, Limits::depth(max));
        let deepest = fuzz::all_paths(&r.tree).iter().map(|p| p.0.len()).max().unwrap();
        prop_assert!(deepest <= max);
        if let Outcome::Stuck { path, reason: StuckReason::DepthLimit } = &r.outcome {
            prop_assert_eq!(path.0.len(), max);
        }
    }
}

fn connectives(f: &prooftree::Formula) -> usize {
    use prooftree::Formula::*;
    match f {
        Not(a) => 1 + connectives(a),
        And(a, b) | Or(a, b) | Implies(a, b) => 1 + connectives(a) + connectives(b),
        _ => 0,
    }
}

#[test]
fn walkthrough_goal() {
    let goal = parse_sequent("|- p => q => (p /\\ q)").unwrap();
    let r = auto_prove(&goal, Limits::default());
    assert!(r.is_completed());
    assert_eq!(r.steps, 5);
    assert_eq!(
        rules_preorder(&r.tree),
        ["ImpR", "ImpR", "AndR", "Id", "Id"]
    );
}

#[test]
fn ambiguity_stops_the_search() {
    let goal = parse_sequent("p => q, p => r, p |- q").unwrap();
    let r = auto_prove(&goal, Limits::default());
    assert_eq!(
        r.outcome,
        Outcome::Stuck {
            path: NodePath::root(),
            reason: StuckReason::Ambiguous {
                rule: LkRule::ImpL,
                candidates: vec![Position::left(0), Position::left(1)],
            },
        }
    );
    assert!(r.tree.is_hole());
}

#[test]
fn quantifiers_are_left_alone() {
    let goal = parse_sequent("forall x. P(x) |- P(y)").unwrap();
    let r = auto_prove(&goal, Limits::default());
    assert_eq!(
        r.outcome,
        Outcome::Stuck {
            path: NodePath::root(),
            reason: StuckReason::NoRule
        }
    );
}

#[test]
fn cancellation_is_reported() {
    let flag = AtomicBool::new(true);
    let goal = parse_sequent("|- p => p").unwrap();
    let r = auto_prove(
        &goal,
        Limits {
            cancel: Some(&flag),
            ..Limits::default()
        },
    );
    assert!(matches!(
        r.outcome,
        Outcome::Stuck {
            reason: StuckReason::Cancelled,
            ..
        }
    ));
    assert!(r.tree.is_hole());
}

#[test]
fn auto_grafts_into_a_tree() {
    let goal = parse_sequent("|- (p => p) /\\ (q \\/ ~q)").unwrap();
    let tree = ProofTree::from_sequent(goal);
    let tree = tree
        .apply_at(
            &NodePath::root(),
            Rule::Lk(LkRule::AndR),
            prooftree::Args::Lk(prooftree::lk::RuleArgs::at(Position::right(0))),
        )
        .unwrap();
    let r = auto_at(&tree, &NodePath::from(vec![1]), Limits::default()).unwrap();
    assert!(r.is_completed());
    assert_eq!(r.tree.holes().len(), 1);
    assert_eq!(r.tree.holes()[0].0, NodePath::from(vec![0]));
    assert!(r.tree.revalidate().is_ok());
    assert!(auto_at(&r.tree, &NodePath::root(), Limits::default()).is_err());
    // the hole and its ancestors keep their ids
    for p in [vec![], vec![0], vec![1]] {
        let p = NodePath::from(p);
        assert_eq!(r.tree.node(&p).unwrap().id(), tree.node(&p).unwrap().id());
    }
}

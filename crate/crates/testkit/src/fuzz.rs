//! Random proof-tree surgery.

use prooftree::hoare::{HoareArgs, HoareRule};
use prooftree::lk::{applicable_lk, LkRule, RuleArgs};
use prooftree::syntax::{fresh_name, Formula, Term};
use prooftree::{Args, Goal, NodePath, ProofTree, Rule};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::gen;

/// A rule and arguments for `goal`. Usually valid, sometimes not: rule
/// constructors are meant to reject the bad ones.
pub fn random_rule(rng: &mut impl Rng, goal: &Goal) -> (Rule, Args) {
    match goal {
        Goal::Lk(s) => {
            let menu: Vec<_> = applicable_lk(s)
                .into_iter()
                .filter(|(r, _)| *r != LkRule::Z3Axiom)
                .collect();
            let (rule, cands) = menu.choose(rng).expect("Cut is always offered").clone();
            let mut args = match cands.choose(rng) {
                Some(p) if rule != LkRule::Id => RuleArgs::at(*p),
                _ => RuleArgs::default(),
            };
            match rule {
                LkRule::ForallL | LkRule::ExistsR => {
                    args.witness = Some(if rng.gen_bool(0.8) {
                        Term::var(*gen::VARS.choose(rng).unwrap())
                    } else {
                        gen::term(rng, 1)
                    });
                }
                LkRule::ForallR | LkRule::ExistsL => {
                    let names = s.all_names();
                    args.fresh_var = Some(if rng.gen_bool(0.8) {
                        fresh_name("v", &names)
                    } else {
                        (*gen::VARS.choose(rng).unwrap()).to_string()
                    });
                }
                LkRule::Cut => {
                    args.cut_formula = Some(if rng.gen_bool(0.5) {
                        gen::fo_formula(rng, 2)
                    } else {
                        gen::prop_formula(rng, 3, 2)
                    });
                }
                _ => {}
            }
            (Rule::Lk(rule), Args::Lk(args))
        }
        Goal::Hoare(t) => {
            let rule = if rng.gen_bool(0.7) {
                HoareRule::for_command(&t.command)
            } else {
                HoareRule::HConseq
            };
            let args = match rule {
                HoareRule::HSeq => HoareArgs::mid(gen::condition(rng, 1)),
                HoareRule::HConseq => {
                    let pre = if rng.gen_bool(0.5) {
                        t.pre.clone()
                    } else {
                        gen::condition(rng, 1)
                    };
                    let post = match &t.command {
                        prooftree::Command::While(b, _) if rng.gen_bool(0.5) => {
                            Formula::and(pre.clone(), Formula::not(b.clone()))
                        }
                        _ if rng.gen_bool(0.5) => t.post.clone(),
                        _ => gen::condition(rng, 1),
                    };
                    HoareArgs::conseq(pre, post)
                }
                _ => HoareArgs::default(),
            };
            (Rule::Hoare(rule), Args::Hoare(args))
        }
    }
}

pub fn random_hole(rng: &mut impl Rng, tree: &ProofTree) -> Option<NodePath> {
    tree.holes().choose(rng).map(|(p, _)| p.clone())
}

/// Every node path, pre-order.
pub fn all_paths(tree: &ProofTree) -> Vec<NodePath> {
    let mut out = Vec::new();
    tree.visit(&mut NodePath::root(), &mut |p, _| out.push(p.clone()));
    out
}

/// Paths of nodes that carry a rule.
pub fn inner_paths(tree: &ProofTree) -> Vec<NodePath> {
    let mut out = Vec::new();
    tree.visit(&mut NodePath::root(), &mut |p, n| {
        if !n.is_hole() {
            out.push(p.clone())
        }
    });
    out
}

/// Applies up to `attempts` random rules at random holes, keeping the ones
/// the kernel accepts.
pub fn grow(rng: &mut impl Rng, mut tree: ProofTree, attempts: usize) -> ProofTree {
    for _ in 0..attempts {
        let Some(path) = random_hole(rng, &tree) else {
            break;
        };
        let goal = tree.node(&path).unwrap().goal().clone();
        let (rule, args) = random_rule(rng, &goal);
        if let Ok(t) = tree.apply_at(&path, rule, args) {
            tree = t;
        }
    }
    tree
}

/// A random goal: a first-order sequent, a propositional one, or a triple.
pub fn random_goal(rng: &mut impl Rng) -> Goal {
    match rng.gen_range(0..3) {
        0 => Goal::Lk(gen::fo_sequent(rng, 3, 2)),
        1 => Goal::Lk(gen::prop_sequent(rng, 3, 3, 3)),
        _ => Goal::Hoare(gen::triple(rng, 3, true)),
    }
}

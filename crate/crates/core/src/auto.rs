//! Deterministic, non-backtracking proof search for sequent goals.
//!
//! At every open goal the search first tries to close it (`Id`, `TruthR`,
//! `FalsityL`), then scans [`RULE_ORDER`] and applies the first rule that
//! has a candidate formula. If that rule has more than one candidate the
//! search refuses to choose and stops at that goal. Cut, weakening,
//! contraction and the quantifier rules are never used, so the search only
//! decomposes the propositional skeleton of a goal.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};

use thiserror::Error;

use crate::lk::{self, LkRule, Position, RuleArgs};
use crate::rule::{Args, Goal, Rule};
use crate::syntax::Sequent;
use crate::tree::{NodePath, ProofTree, TreeError};

/// Single-premise rules come before branching ones.
pub const RULE_ORDER: [LkRule; 8] = [
    LkRule::NotL,
    LkRule::NotR,
    LkRule::AndL,
    LkRule::OrR,
    LkRule::ImpR,
    LkRule::AndR,
    LkRule::OrL,
    LkRule::ImpL,
];

const CLOSING_RULES: [LkRule; 3] = [LkRule::Id, LkRule::TruthR, LkRule::FalsityL];

pub const DEFAULT_MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StuckReason {
    /// `rule` applies to several formulas and the search will not pick one.
    Ambiguous {
        rule: LkRule,
        candidates: Vec<Position>,
    },
    /// Nothing in the rule order matches (atoms or quantifiers only).
    NoRule,
    DepthLimit,
    Cancelled,
}

impl fmt::Display for StuckReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StuckReason::Ambiguous { rule, candidates } => {
                let cs: Vec<String> = candidates.iter().map(|c| c.to_string()).collect();
                write!(
                    f,
                    "ambiguous: {rule} applies to several formulas ({}); choose one",
                    cs.join(", ")
                )
            }
            StuckReason::NoRule => write!(f, "no rule applies"),
            StuckReason::DepthLimit => write!(f, "depth limit reached"),
            StuckReason::Cancelled => write!(f, "cancelled"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Completed,
    /// Where the first (leftmost) stuck goal is, and why.
    Stuck {
        path: NodePath,
        reason: StuckReason,
    },
}

#[derive(Debug, Clone)]
pub struct AutoResult {
    pub tree: ProofTree,
    pub outcome: Outcome,
    /// Rules applied, closures included.
    pub steps: usize,
}

impl AutoResult {
    pub fn is_completed(&self) -> bool {
        self.outcome == Outcome::Completed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutoError {
    #[error("automation only works on sequent calculus goals")]
    NotLkGoal,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Search limits and an optional cancellation flag, checked before every
/// rule application.
#[derive(Debug, Clone, Copy)]
pub struct Limits<'a> {
    pub max_depth: usize,
    pub cancel: Option<&'a AtomicBool>,
}

impl Default for Limits<'_> {
    fn default() -> Self {
        Limits {
            max_depth: DEFAULT_MAX_DEPTH,
            cancel: None,
        }
    }
}

impl<'a> Limits<'a> {
    pub fn depth(max_depth: usize) -> Limits<'a> {
        Limits {
            max_depth,
            cancel: None,
        }
    }
}

struct Search<'a> {
    limits: Limits<'a>,
    steps: usize,
    stuck: Option<(NodePath, StuckReason)>,
}

impl Search<'_> {
    fn note_stuck(&mut self, path: &NodePath, reason: StuckReason) {
        if self.stuck.is_none() {
            self.stuck = Some((path.clone(), reason));
        }
    }

    fn cancelled(&self) -> bool {
        self.limits
            .cancel
            .is_some_and(|flag| flag.load(Ordering::Relaxed))
    }

    fn solve(&mut self, goal: &Sequent, path: &mut NodePath) -> ProofTree {
        let hole = || ProofTree::from_sequent(goal.clone());
        if self.cancelled() {
            self.note_stuck(path, StuckReason::Cancelled);
            return hole();
        }
        if path.0.len() >= self.limits.max_depth {
            self.note_stuck(path, StuckReason::DepthLimit);
            return hole();
        }

        for rule in CLOSING_RULES {
            let cands = lk::candidates(goal, rule);
            if let Some(&first) = cands.first() {
                let args = if rule == LkRule::Id {
                    RuleArgs::default()
                } else {
                    RuleArgs::at(first)
                };
                let app = lk::apply_lk(goal, rule, &args).expect("candidate was checked");
                debug_assert!(app.premises().is_empty());
                self.steps += 1;
                return ProofTree::from_parts(
                    Goal::Lk(goal.clone()),
                    rule.into(),
                    args.into(),
                    vec![],
                );
            }
        }

        for rule in RULE_ORDER {
            let cands = lk::candidates(goal, rule);
            match cands.as_slice() {
                [] => continue,
                [only] => {
                    let args = RuleArgs::at(*only);
                    let app = lk::apply_lk(goal, rule, &args).expect("candidate was checked");
                    self.steps += 1;
                    let children = app
                        .premises()
                        .iter()
                        .enumerate()
                        .map(|(i, p)| {
                            path.0.push(i);
                            let child = self.solve(p, path);
                            path.0.pop();
                            child
                        })
                        .collect();
                    return ProofTree::from_parts(
                        Goal::Lk(goal.clone()),
                        Rule::Lk(rule),
                        Args::Lk(args),
                        children,
                    );
                }
                _ => {
                    self.note_stuck(
                        path,
                        StuckReason::Ambiguous {
                            rule,
                            candidates: cands,
                        },
                    );
                    return hole();
                }
            }
        }

        self.note_stuck(path, StuckReason::NoRule);
        hole()
    }
}

fn search(goal: &Sequent, base: &NodePath, limits: Limits<'_>) -> (ProofTree, Outcome, usize) {
    let mut s = Search {
        limits,
        steps: 0,
        stuck: None,
    };
    let mut path = base.clone();
    let tree = s.solve(goal, &mut path);
    let outcome = match s.stuck {
        None => Outcome::Completed,
        Some((path, reason)) => Outcome::Stuck { path, reason },
    };
    (tree, outcome, s.steps)
}

/// Runs the search on a fresh goal.
pub fn auto_prove(goal: &Sequent, limits: Limits<'_>) -> AutoResult {
    let (tree, outcome, steps) = search(goal, &NodePath::root(), limits);
    AutoResult {
        tree,
        outcome,
        steps,
    }
}

/// Runs the search at the hole at `path` and grafts the result in. On a
/// stuck search the partial progress is kept; unfinished goals stay holes.
pub fn auto_at(
    tree: &ProofTree,
    path: &NodePath,
    limits: Limits<'_>,
) -> Result<AutoResult, AutoError> {
    let node = tree.node(path)?;
    if !node.is_hole() {
        return Err(TreeError::NotAHole(path.clone()).into());
    }
    let Goal::Lk(goal) = node.goal() else {
        return Err(AutoError::NotLkGoal);
    };
    // Depth counts from the hole, not from the root of the whole tree.
    let limits = Limits {
        max_depth: limits.max_depth.saturating_add(path.0.len()),
        ..limits
    };
    let (sub, outcome, steps) = search(goal, path, limits);
    let tree = tree.graft(path, sub)?;
    Ok(AutoResult {
        tree,
        outcome,
        steps,
    })
}

//! Proof trees with holes.
//!
//! Trees are persistent: every operation returns a new tree and leaves its
//! input untouched, which makes undo and detach plain functions. Node ids
//! come from a process-wide counter, so they are unique across every tree a
//! workspace holds; they are ignored by `PartialEq`.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rule::{self, Args, Goal, Rule, RuleError};
use crate::syntax::{HoareTriple, Sequent};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeId(u64);

impl NodeId {
    fn fresh() -> NodeId {
        NodeId(NEXT_ID.fetch_add(1, Ordering::Relaxed))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// Child indices from the root; empty is the root itself.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> NodePath {
        NodePath(Vec::new())
    }

    pub fn child(&self, index: usize) -> NodePath {
        let mut v = self.0.clone();
        v.push(index);
        NodePath(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for NodePath {
    fn from(v: Vec<usize>) -> NodePath {
        NodePath(v)
    }
}

impl From<&[usize]> for NodePath {
    fn from(v: &[usize]) -> NodePath {
        NodePath(v.to_vec())
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone)]
pub enum Status {
    Hole,
    /// Closed by a zero-premise rule.
    Closed {
        rule: Rule,
        args: Args,
    },
    Derived {
        rule: Rule,
        args: Args,
        children: Vec<ProofTree>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("no node at path {0}")]
    InvalidPath(NodePath),
    #[error("node at {0} is not a hole")]
    NotAHole(NodePath),
    #[error("node at {0} is already a hole")]
    AlreadyHole(NodePath),
    #[error("the root of a tree cannot be detached")]
    CannotDetachRoot,
    #[error("goal mismatch: the hole needs `{expected}` but the tree proves `{found}`")]
    GoalMismatch { expected: String, found: String },
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// Why a tree failed revalidation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid inference at {path}: {reason}")]
pub struct RevalidationError {
    pub path: NodePath,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct ProofTree {
    id: NodeId,
    goal: Goal,
    status: Status,
    hidden: bool,
}

impl PartialEq for Status {
    fn eq(&self, other: &Status) -> bool {
        match (self, other) {
            (Status::Hole, Status::Hole) => true,
            (Status::Closed { rule: r1, args: a1 }, Status::Closed { rule: r2, args: a2 }) => {
                r1 == r2 && a1 == a2
            }
            (
                Status::Derived {
                    rule: r1,
                    args: a1,
                    children: c1,
                },
                Status::Derived {
                    rule: r2,
                    args: a2,
                    children: c2,
                },
            ) => r1 == r2 && a1 == a2 && c1 == c2,
            _ => false,
        }
    }
}

impl Eq for Status {}

/// Structural equality: goals, rules, arguments and hidden flags. Node ids
/// are not compared.
impl PartialEq for ProofTree {
    fn eq(&self, other: &ProofTree) -> bool {
        self.goal == other.goal && self.hidden == other.hidden && self.status == other.status
    }
}

impl Eq for ProofTree {}

impl ProofTree {
    /// A single hole for `goal`.
    pub fn new(goal: Goal) -> ProofTree {
        ProofTree {
            id: NodeId::fresh(),
            goal,
            status: Status::Hole,
            hidden: false,
        }
    }

    pub fn from_sequent(s: Sequent) -> ProofTree {
        ProofTree::new(Goal::Lk(s))
    }

    pub fn from_triple(t: HoareTriple) -> ProofTree {
        ProofTree::new(Goal::Hoare(t))
    }

    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn goal(&self) -> &Goal {
        &self.goal
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    pub fn is_hidden(&self) -> bool {
        self.hidden
    }

    pub fn is_hole(&self) -> bool {
        matches!(self.status, Status::Hole)
    }

    /// The rule applied at this node, if any.
    pub fn rule(&self) -> Option<Rule> {
        match &self.status {
            Status::Hole => None,
            Status::Closed { rule, .. } | Status::Derived { rule, .. } => Some(*rule),
        }
    }

    pub fn args(&self) -> Option<&Args> {
        match &self.status {
            Status::Hole => None,
            Status::Closed { args, .. } | Status::Derived { args, .. } => Some(args),
        }
    }

    pub fn is_pseudo_axiom(&self) -> bool {
        self.rule().is_some_and(Rule::is_pseudo_axiom)
    }

    pub fn children(&self) -> &[ProofTree] {
        match &self.status {
            Status::Derived { children, .. } => children,
            _ => &[],
        }
    }

    pub fn node(&self, path: &NodePath) -> Result<&ProofTree, TreeError> {
        let mut node = self;
        for &i in &path.0 {
            node = node
                .children()
                .get(i)
                .ok_or_else(|| TreeError::InvalidPath(path.clone()))?;
        }
        Ok(node)
    }

    /// Rebuilds the spine down to `path`, replacing the node there by `f(node)`.
    fn update<F>(&self, path: &NodePath, depth: usize, f: F) -> Result<ProofTree, TreeError>
    where
        F: FnOnce(&ProofTree) -> Result<ProofTree, TreeError>,
    {
        let Some(&i) = path.0.get(depth) else {
            return f(self);
        };
        let Status::Derived {
            rule,
            args,
            children,
        } = &self.status
        else {
            return Err(TreeError::InvalidPath(path.clone()));
        };
        let child = children
            .get(i)
            .ok_or_else(|| TreeError::InvalidPath(path.clone()))?;
        let mut children = children.clone();
        children[i] = child.update(path, depth + 1, f)?;
        Ok(ProofTree {
            status: Status::Derived {
                rule: *rule,
                args: args.clone(),
                children,
            },
            ..self.clone()
        })
    }

    fn with_status(&self, status: Status) -> ProofTree {
        ProofTree {
            id: self.id,
            goal: self.goal.clone(),
            status,
            hidden: self.hidden,
        }
    }

    /// Applies `rule` at the hole at `path`. The hole becomes closed or
    /// derived with one fresh hole per premise.
    pub fn apply_at(
        &self,
        path: &NodePath,
        rule: Rule,
        args: Args,
    ) -> Result<ProofTree, TreeError> {
        self.update(path, 0, |node| {
            if !node.is_hole() {
                return Err(TreeError::NotAHole(path.clone()));
            }
            let (args, premises) = rule::apply_resolved(&node.goal, rule, &args)?;
            Ok(node.with_status(build_status(rule, args, premises)))
        })
    }

    /// Undoes the rule at `path` and everything above it.
    pub fn prune_at(&self, path: &NodePath) -> Result<ProofTree, TreeError> {
        self.update(path, 0, |node| {
            if node.is_hole() {
                return Err(TreeError::AlreadyHole(path.clone()));
            }
            Ok(node.with_status(Status::Hole))
        })
    }

    /// Splits off the subtree at `path`. Returns the remainder, which has a
    /// hole at `path`, and the detached subtree as a root of its own.
    pub fn detach_at(&self, path: &NodePath) -> Result<(ProofTree, ProofTree), TreeError> {
        if path.is_root() {
            return Err(TreeError::CannotDetachRoot);
        }
        let detached = self.node(path)?.clone();
        if detached.is_hole() {
            return Err(TreeError::AlreadyHole(path.clone()));
        }
        let remainder = self.update(path, 0, |node| Ok(ProofTree::new(node.goal.clone())))?;
        Ok((remainder, detached))
    }

    /// Plugs `sub` into the hole at `path`. The goals must be alpha-equal.
    /// Every node of `sub` gets a fresh id.
    pub fn attach_at(&self, path: &NodePath, sub: &ProofTree) -> Result<ProofTree, TreeError> {
        self.update(path, 0, |node| {
            if !node.is_hole() {
                return Err(TreeError::NotAHole(path.clone()));
            }
            if !node.goal.alpha_eq(&sub.goal) {
                return Err(TreeError::GoalMismatch {
                    expected: node.goal.to_string(),
                    found: sub.goal.to_string(),
                });
            }
            Ok(sub.renumbered())
        })
    }

    /// Copy of this tree where every node has a fresh id.
    pub fn renumbered(&self) -> ProofTree {
        let status = match &self.status {
            Status::Derived {
                rule,
                args,
                children,
            } => Status::Derived {
                rule: *rule,
                args: args.clone(),
                children: children.iter().map(ProofTree::renumbered).collect(),
            },
            other => other.clone(),
        };
        ProofTree {
            id: NodeId::fresh(),
            goal: self.goal.clone(),
            status,
            hidden: self.hidden,
        }
    }

    /// Sets the presentation-only hidden flag of the node at `path`.
    pub fn set_hidden(&self, path: &NodePath, hidden: bool) -> Result<ProofTree, TreeError> {
        self.update(path, 0, |node| {
            Ok(ProofTree {
                hidden,
                ..node.clone()
            })
        })
    }

    pub fn is_complete(&self) -> bool {
        match &self.status {
            Status::Hole => false,
            Status::Closed { .. } => true,
            Status::Derived { children, .. } => children.iter().all(ProofTree::is_complete),
        }
    }

    /// Every hole, left to right.
    pub fn holes(&self) -> Vec<(NodePath, &Goal)> {
        let mut out = Vec::new();
        self.visit(&mut NodePath::root(), &mut |path, node| {
            if node.is_hole() {
                out.push((path.clone(), &node.goal));
            }
        });
        out
    }

    /// Pre-order traversal with paths.
    pub fn visit<'a>(&'a self, path: &mut NodePath, f: &mut impl FnMut(&NodePath, &'a ProofTree)) {
        f(path, self);
        for (i, c) in self.children().iter().enumerate() {
            path.0.push(i);
            c.visit(path, f);
            path.0.pop();
        }
    }

    /// Paths of nodes with the hidden flag set, in pre-order.
    pub fn hidden_paths(&self) -> Vec<NodePath> {
        let mut out = Vec::new();
        self.visit(&mut NodePath::root(), &mut |path, node| {
            if node.hidden {
                out.push(path.clone());
            }
        });
        out
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(ProofTree::node_count)
            .sum::<usize>()
    }

    /// Recomputes every inference from its rule and arguments and compares
    /// the premises with the children's goals (up to alpha-equivalence).
    ///
    /// Pseudo-axiom closures cannot be rechecked without a solver; they are
    /// accepted here and carry their marker everywhere they surface.
    pub fn revalidate(&self) -> Result<(), RevalidationError> {
        self.revalidate_with(&mut |_, _| Ok(()))
    }

    /// Like [`revalidate`](Self::revalidate), but hands every pseudo-axiom
    /// goal to `pseudo` for an independent check.
    pub fn revalidate_with(
        &self,
        pseudo: &mut dyn FnMut(&NodePath, &Sequent) -> Result<(), String>,
    ) -> Result<(), RevalidationError> {
        let mut result = Ok(());
        self.visit(&mut NodePath::root(), &mut |path, node| {
            if result.is_err() {
                return;
            }
            if let Err(reason) = node.check_local(path, pseudo) {
                result = Err(RevalidationError {
                    path: path.clone(),
                    reason,
                });
            }
        });
        result
    }

    fn check_local(
        &self,
        path: &NodePath,
        pseudo: &mut dyn FnMut(&NodePath, &Sequent) -> Result<(), String>,
    ) -> Result<(), String> {
        let (rule, args, children): (Rule, &Args, &[ProofTree]) = match &self.status {
            Status::Hole => return Ok(()),
            Status::Closed { rule, args } => (*rule, args, &[]),
            Status::Derived {
                rule,
                args,
                children,
            } => (*rule, args, children),
        };
        if rule.is_pseudo_axiom() {
            let Goal::Lk(s) = &self.goal else {
                return Err("pseudo-axiom on a Hoare goal".into());
            };
            if !children.is_empty()
                || !args.is_empty()
                || matches!(self.status, Status::Derived { .. })
            {
                return Err("pseudo-axiom must be a closed leaf without arguments".into());
            }
            return pseudo(path, s);
        }
        let premises = rule::apply(&self.goal, rule, args).map_err(|e| e.to_string())?;
        if premises.is_empty() != matches!(self.status, Status::Closed { .. }) {
            return Err(format!("{rule} recorded with the wrong status"));
        }
        if premises.len() != children.len() {
            return Err(format!(
                "{rule} yields {} premise(s) but the node has {} child(ren)",
                premises.len(),
                children.len()
            ));
        }
        for (i, (p, c)) in premises.iter().zip(children).enumerate() {
            if !p.alpha_eq(&c.goal) {
                return Err(format!(
                    "premise {i} should be `{p}` but the child proves `{}`",
                    c.goal
                ));
            }
        }
        Ok(())
    }

    /// Closes the hole at `path` as a solver-justified pseudo-axiom. Callers
    /// are responsible for having obtained an affirmative validity verdict.
    pub(crate) fn close_pseudo_axiom(&self, path: &NodePath) -> Result<ProofTree, TreeError> {
        self.update(path, 0, |node| {
            if !node.is_hole() {
                return Err(TreeError::NotAHole(path.clone()));
            }
            if !node.goal.is_lk() {
                return Err(TreeError::Rule(RuleError::SchemaMismatch(
                    "the Z3 pseudo-axiom only applies to sequent goals".into(),
                )));
            }
            let rule = Rule::Lk(crate::lk::LkRule::Z3Axiom);
            Ok(node.with_status(Status::Closed {
                rule,
                args: rule.no_args(),
            }))
        })
    }

    /// Replaces the hole at `path` by `sub`, whose root goal must be
    /// identical. The root keeps the hole's id and hidden flag.
    pub(crate) fn graft(&self, path: &NodePath, sub: ProofTree) -> Result<ProofTree, TreeError> {
        self.update(path, 0, move |node| {
            if !node.is_hole() {
                return Err(TreeError::NotAHole(path.clone()));
            }
            debug_assert_eq!(node.goal, sub.goal);
            // the hole keeps its identity, as with apply_at
            Ok(ProofTree {
                id: node.id,
                hidden: node.hidden,
                ..sub
            })
        })
    }

    /// A node proving `goal` by an already-validated application whose
    /// children prove its premises in order.
    pub(crate) fn from_parts(
        goal: Goal,
        rule: Rule,
        args: Args,
        children: Vec<ProofTree>,
    ) -> ProofTree {
        let status = if children.is_empty() {
            Status::Closed { rule, args }
        } else {
            Status::Derived {
                rule,
                args,
                children,
            }
        };
        ProofTree {
            id: NodeId::fresh(),
            goal,
            status,
            hidden: false,
        }
    }
}

fn build_status(rule: Rule, args: Args, premises: Vec<Goal>) -> Status {
    if premises.is_empty() {
        Status::Closed { rule, args }
    } else {
        Status::Derived {
            rule,
            args,
            children: premises.into_iter().map(ProofTree::new).collect(),
        }
    }
}

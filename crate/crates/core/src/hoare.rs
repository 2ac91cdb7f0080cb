//! Hoare logic rules for the while language.
//!
//! Side conditions compare formulas up to alpha-equivalence only. Anything
//! that needs arithmetic goes through the consequence rule, whose outer
//! premises are ordinary sequents.

use std::fmt;

use crate::rule::{Goal, RuleError};
use crate::syntax::{alpha_eq, Command, Formula, HoareTriple, Sequent, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HoareRule {
    HSkip,
    HAssign,
    HSeq,
    HIf,
    HWhile,
    HConseq,
}

impl HoareRule {
    pub const ALL: [HoareRule; 6] = [
        HoareRule::HSkip,
        HoareRule::HAssign,
        HoareRule::HSeq,
        HoareRule::HIf,
        HoareRule::HWhile,
        HoareRule::HConseq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HoareRule::HSkip => "HSkip",
            HoareRule::HAssign => "HAssign",
            HoareRule::HSeq => "HSeq",
            HoareRule::HIf => "HIf",
            HoareRule::HWhile => "HWhile",
            HoareRule::HConseq => "HConseq",
        }
    }

    pub fn from_name(name: &str) -> Option<HoareRule> {
        HoareRule::ALL.iter().copied().find(|r| r.name() == name)
    }

    /// The structural rule for a command's head constructor.
    pub fn for_command(c: &Command) -> HoareRule {
        match c {
            Command::Skip => HoareRule::HSkip,
            Command::Assign(..) => HoareRule::HAssign,
            Command::Seq(..) => HoareRule::HSeq,
            Command::If(..) => HoareRule::HIf,
            Command::While(..) => HoareRule::HWhile,
        }
    }
}

impl fmt::Display for HoareRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct HoareArgs {
    /// Intermediate assertion for sequencing.
    pub mid: Option<Formula>,
    /// New precondition P′ for consequence.
    pub pre: Option<Formula>,
    /// New postcondition Q′ for consequence.
    pub post: Option<Formula>,
}

impl HoareArgs {
    pub fn mid(f: Formula) -> HoareArgs {
        HoareArgs {
            mid: Some(f),
            ..HoareArgs::default()
        }
    }

    pub fn conseq(pre: Formula, post: Formula) -> HoareArgs {
        HoareArgs {
            mid: None,
            pre: Some(pre),
            post: Some(post),
        }
    }
}

/// The command rule for the goal's head, then the consequence rule.
pub fn applicable_hoare(goal: &HoareTriple) -> Vec<HoareRule> {
    vec![HoareRule::for_command(&goal.command), HoareRule::HConseq]
}

fn schema(rule: HoareRule, args: &HoareArgs) -> Result<(), RuleError> {
    let want_mid = rule == HoareRule::HSeq;
    let want_conseq = rule == HoareRule::HConseq;
    let ok = args.mid.is_some() == want_mid
        && args.pre.is_some() == want_conseq
        && args.post.is_some() == want_conseq;
    if ok {
        Ok(())
    } else {
        let expected = match rule {
            HoareRule::HSeq => "exactly a middle assertion",
            HoareRule::HConseq => "exactly a new precondition and a new postcondition",
            _ => "no arguments",
        };
        Err(RuleError::SchemaMismatch(format!(
            "{} takes {expected}",
            rule.name()
        )))
    }
}

fn side_condition(rule: HoareRule, expected: &Formula, found: &Formula) -> Result<(), RuleError> {
    if alpha_eq(expected, found) {
        Ok(())
    } else {
        Err(RuleError::SideConditionFailed {
            rule: rule.name(),
            expected: expected.to_string(),
            found: found.to_string(),
        })
    }
}

/// Applies a Hoare rule upward and returns its premises in order.
pub fn apply_hoare(
    goal: &HoareTriple,
    rule: HoareRule,
    args: &HoareArgs,
) -> Result<Vec<Goal>, RuleError> {
    schema(rule, args)?;
    if rule != HoareRule::HConseq && HoareRule::for_command(&goal.command) != rule {
        return Err(RuleError::CommandMismatch {
            rule: rule.name(),
            command: goal.command.to_string(),
        });
    }
    let HoareTriple { pre, command, post } = goal;
    let triple = |p: &Formula, c: &Command, q: &Formula| {
        Goal::Hoare(HoareTriple::new(p.clone(), c.clone(), q.clone()))
    };

    let premises = match (rule, command) {
        (HoareRule::HSkip, Command::Skip) => {
            side_condition(rule, post, pre)?;
            vec![]
        }
        (HoareRule::HAssign, Command::Assign(x, e)) => {
            side_condition(rule, &post.substitute(x, e), pre)?;
            vec![]
        }
        (HoareRule::HSeq, Command::Seq(c1, c2)) => {
            let mid = args.mid.as_ref().expect("checked by schema");
            vec![triple(pre, c1, mid), triple(mid, c2, post)]
        }
        (HoareRule::HIf, Command::If(b, c1, c2)) => vec![
            triple(&Formula::and(pre.clone(), b.clone()), c1, post),
            triple(
                &Formula::and(pre.clone(), Formula::not(b.clone())),
                c2,
                post,
            ),
        ],
        (HoareRule::HWhile, Command::While(b, body)) => {
            let normal_post = Formula::and(pre.clone(), Formula::not(b.clone()));
            side_condition(rule, &normal_post, post)?;
            vec![triple(&Formula::and(pre.clone(), b.clone()), body, pre)]
        }
        (HoareRule::HConseq, _) => {
            let new_pre = args.pre.as_ref().expect("checked by schema");
            let new_post = args.post.as_ref().expect("checked by schema");
            vec![
                Goal::Lk(Sequent::new(vec![pre.clone()], vec![new_pre.clone()])),
                triple(new_pre, command, new_post),
                Goal::Lk(Sequent::new(vec![new_post.clone()], vec![post.clone()])),
            ]
        }
        _ => unreachable!("command head checked above"),
    };

    let base = Signature::of_triple(goal)?;
    for p in &premises {
        let mut sig = base.clone();
        match p {
            Goal::Lk(s) => sig.add_sequent(s)?,
            Goal::Hoare(t) => sig.add_triple(t)?,
        }
    }
    Ok(premises)
}

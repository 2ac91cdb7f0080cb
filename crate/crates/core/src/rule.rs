//! Goals, rule names and rule arguments shared by both calculi.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::hoare::{self, HoareArgs, HoareRule};
use crate::lk::{self, LkRule, Position, RuleArgs};
use crate::syntax::{sequent_alpha_eq, triple_alpha_eq, HoareTriple, Sequent, SignatureError};

/// What a proof-tree node is trying to establish.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Goal {
    Lk(Sequent),
    Hoare(HoareTriple),
}

impl Goal {
    pub fn as_sequent(&self) -> Option<&Sequent> {
        match self {
            Goal::Lk(s) => Some(s),
            Goal::Hoare(_) => None,
        }
    }

    pub fn as_triple(&self) -> Option<&HoareTriple> {
        match self {
            Goal::Hoare(t) => Some(t),
            Goal::Lk(_) => None,
        }
    }

    pub fn is_lk(&self) -> bool {
        matches!(self, Goal::Lk(_))
    }

    pub fn alpha_eq(&self, other: &Goal) -> bool {
        match (self, other) {
            (Goal::Lk(a), Goal::Lk(b)) => sequent_alpha_eq(a, b),
            (Goal::Hoare(a), Goal::Hoare(b)) => triple_alpha_eq(a, b),
            _ => false,
        }
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Lk(s) => s.fmt(f),
            Goal::Hoare(t) => t.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Lk(LkRule),
    Hoare(HoareRule),
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Lk(r) => r.name(),
            Rule::Hoare(r) => r.name(),
        }
    }

    pub fn is_pseudo_axiom(self) -> bool {
        self == Rule::Lk(LkRule::Z3Axiom)
    }

    /// Arguments carrying nothing, of the right calculus for this rule.
    pub fn no_args(self) -> Args {
        match self {
            Rule::Lk(_) => Args::Lk(RuleArgs::default()),
            Rule::Hoare(_) => Args::Hoare(HoareArgs::default()),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(r) = LkRule::from_name(s) {
            Ok(Rule::Lk(r))
        } else if let Some(r) = HoareRule::from_name(s) {
            Ok(Rule::Hoare(r))
        } else {
            Err(RuleError::SchemaMismatch(format!("unknown rule `{s}`")))
        }
    }
}

impl From<LkRule> for Rule {
    fn from(r: LkRule) -> Rule {
        Rule::Lk(r)
    }
}

impl From<HoareRule> for Rule {
    fn from(r: HoareRule) -> Rule {
        Rule::Hoare(r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Args {
    Lk(RuleArgs),
    Hoare(HoareArgs),
}

impl Args {
    pub fn is_empty(&self) -> bool {
        match self {
            Args::Lk(a) => *a == RuleArgs::default(),
            Args::Hoare(a) => *a == HoareArgs::default(),
        }
    }
}

impl From<RuleArgs> for Args {
    fn from(a: RuleArgs) -> Args {
        Args::Lk(a)
    }
}

impl From<HoareArgs> for Args {
    fn from(a: HoareArgs) -> Args {
        Args::Hoare(a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("{rule} has no principal formula: {detail}")]
    NoPrincipal { rule: &'static str, detail: String },
    #[error("{rule} could apply to several formulas ({}); pick one", fmt_positions(.candidates))]
    AmbiguousPrincipal {
        rule: &'static str,
        candidates: Vec<Position>,
    },
    #[error("eigenvariable condition violated: {var} {detail}")]
    EigenvariableViolation { var: String, detail: String },
    #[error("{rule} does not match the command `{command}`")]
    CommandMismatch { rule: &'static str, command: String },
    #[error("{rule} side condition failed: expected `{expected}`, found `{found}`")]
    SideConditionFailed {
        rule: &'static str,
        expected: String,
        found: String,
    },
    #[error("premise would be ill-formed: {0}")]
    SignatureConflict(#[from] SignatureError),
}

impl RuleError {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            RuleError::SchemaMismatch(_) => "SchemaMismatch",
            RuleError::NoPrincipal { .. } => "NoPrincipal",
            RuleError::AmbiguousPrincipal { .. } => "AmbiguousPrincipal",
            RuleError::EigenvariableViolation { .. } => "EigenvariableViolation",
            RuleError::CommandMismatch { .. } => "CommandMismatch",
            RuleError::SideConditionFailed { .. } => "SideConditionFailed",
            RuleError::SignatureConflict(_) => "SignatureConflict",
        }
    }
}

fn fmt_positions(ps: &[Position]) -> String {
    ps.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Validates one rule application and returns its premises in order.
///
/// The pseudo-axiom is not a calculus rule and is always rejected here; the
/// solver bridge closes goals with it instead.
pub fn apply(goal: &Goal, rule: Rule, args: &Args) -> Result<Vec<Goal>, RuleError> {
    apply_resolved(goal, rule, args).map(|(_, premises)| premises)
}

/// Like [`apply`], but also returns the arguments with an omitted LK
/// principal filled in.
pub fn apply_resolved(
    goal: &Goal,
    rule: Rule,
    args: &Args,
) -> Result<(Args, Vec<Goal>), RuleError> {
    match (goal, rule, args) {
        (Goal::Lk(s), Rule::Lk(r), Args::Lk(a)) => {
            let app = lk::apply_lk(s, r, a)?;
            let premises = app.premises().iter().cloned().map(Goal::Lk).collect();
            Ok((Args::Lk(app.args().clone()), premises))
        }
        (Goal::Hoare(t), Rule::Hoare(r), Args::Hoare(a)) => {
            Ok((args.clone(), hoare::apply_hoare(t, r, a)?))
        }
        (Goal::Lk(_), Rule::Hoare(r), _) => Err(RuleError::SchemaMismatch(format!(
            "{} is a Hoare logic rule but the goal is a sequent",
            r.name()
        ))),
        (Goal::Hoare(_), Rule::Lk(r), _) => Err(RuleError::SchemaMismatch(format!(
            "{} is a sequent calculus rule but the goal is a Hoare triple",
            r.name()
        ))),
        (_, r, _) => Err(RuleError::SchemaMismatch(format!(
            "arguments do not belong to the calculus of {}",
            r.name()
        ))),
    }
}

//! Saving and loading proofs as replay scripts.
//!
//! A file records the goal and the rule applications in pre-order, never
//! the tree itself. Loading parses the goal and replays every step through
//! [`ProofTree::apply_at`], so a file can only describe inferences the
//! kernel accepts. See `docs/fileformat.md` for the schema.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hoare::HoareArgs;
use crate::lk::{LkRule, Position, RuleArgs};
use crate::parser::{parse_formula, parse_sequent, parse_term, parse_triple, ParseError};
use crate::rule::{Args, Goal, Rule, RuleError};
use crate::smt::{SmtVerdict, ValidityOracle};
use crate::syntax::Formula;
use crate::tree::{NodePath, ProofTree, Status, TreeError};

pub const FORMAT_VERSION: u32 = 1;

/// Conventional file extension.
pub const EXTENSION: &str = "ptb.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoalKind {
    Lk,
    Hoare,
}

/// Rule arguments as text. Terms and formulas use the surface syntax.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StepArgs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub principal: Option<Position>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fresh_var: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pre: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub post: Option<String>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Step {
    pub path: NodePath,
    pub rule: String,
    #[serde(default)]
    pub args: StepArgs,
    /// Set exactly on solver closures.
    #[serde(default, skip_serializing_if = "is_false")]
    pub pseudo_axiom: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ProofScript {
    pub version: u32,
    pub goal_kind: GoalKind,
    pub goal_text: String,
    pub steps: Vec<Step>,
    #[serde(default)]
    pub hidden_paths: Vec<NodePath>,
}

/// What went wrong with one step.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("cannot parse {field} `{text}`: {error}")]
    Parse {
        field: &'static str,
        text: String,
        error: ParseError,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("pseudo-axiom rejected: {0}")]
    PseudoAxiom(String),
}

impl From<RuleError> for StepError {
    fn from(e: RuleError) -> StepError {
        StepError::Tree(TreeError::Rule(e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PersistError {
    #[error("malformed proof file: {0}")]
    MalformedFile(String),
    #[error("unsupported proof file version {0}")]
    VersionUnsupported(u64),
    #[error("cannot parse the goal: {0}")]
    Parse(ParseError),
    #[error("step {step} does not replay: {error}")]
    Replay { step: usize, error: StepError },
    #[error("hidden path {0}: {1}")]
    HiddenPath(NodePath, TreeError),
}

impl From<&Args> for StepArgs {
    fn from(args: &Args) -> StepArgs {
        step_args(args)
    }
}

fn step_args(args: &Args) -> StepArgs {
    let text = |f: &Option<Formula>| f.as_ref().map(|f| f.to_string());
    match args {
        Args::Lk(a) => StepArgs {
            principal: a.principal,
            witness: a.witness.as_ref().map(|t| t.to_string()),
            fresh_var: a.fresh_var.clone(),
            cut_formula: text(&a.cut_formula),
            ..StepArgs::default()
        },
        Args::Hoare(a) => StepArgs {
            mid: text(&a.mid),
            pre: text(&a.pre),
            post: text(&a.post),
            ..StepArgs::default()
        },
    }
}

/// The replay script for `tree`.
pub fn save_proof(tree: &ProofTree) -> ProofScript {
    let mut steps = Vec::new();
    tree.visit(&mut NodePath::root(), &mut |path, node| {
        if let (Some(rule), Some(args)) = (node.rule(), node.args()) {
            steps.push(Step {
                path: path.clone(),
                rule: rule.name().to_string(),
                args: step_args(args),
                pseudo_axiom: rule.is_pseudo_axiom(),
            });
        }
    });
    let goal_kind = match tree.goal() {
        Goal::Lk(_) => GoalKind::Lk,
        Goal::Hoare(_) => GoalKind::Hoare,
    };
    ProofScript {
        version: FORMAT_VERSION,
        goal_kind,
        goal_text: tree.goal().to_string(),
        steps,
        hidden_paths: tree.hidden_paths(),
    }
}

/// Pretty-printed UTF-8 JSON.
pub fn serialize(script: &ProofScript) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(script).expect("scripts always serialize");
    bytes.push(b'\n');
    bytes
}

fn parse_field<T>(
    field: &'static str,
    text: &Option<String>,
    parse: fn(&str) -> Result<T, ParseError>,
) -> Result<Option<T>, StepError> {
    text.as_deref()
        .map(|t| {
            parse(t).map_err(|error| StepError::Parse {
                field,
                text: t.to_string(),
                error,
            })
        })
        .transpose()
}

impl StepArgs {
    /// Parses the text fields into arguments for `rule`. Fields that belong
    /// to the other calculus are rejected.
    pub fn resolve(&self, rule: Rule) -> Result<Args, StepError> {
        rule_args(rule, self)
    }
}

fn rule_args(rule: Rule, a: &StepArgs) -> Result<Args, StepError> {
    let foreign = |what: &str| {
        RuleError::SchemaMismatch(format!("{} does not take {what} arguments", rule.name()))
    };
    match rule {
        Rule::Lk(_) => {
            if a.mid.is_some() || a.pre.is_some() || a.post.is_some() {
                return Err(foreign("Hoare logic").into());
            }
            Ok(Args::Lk(RuleArgs {
                principal: a.principal,
                witness: parse_field("witness", &a.witness, parse_term)?,
                fresh_var: a.fresh_var.clone(),
                cut_formula: parse_field("cutFormula", &a.cut_formula, parse_formula)?,
            }))
        }
        Rule::Hoare(_) => {
            if a.principal.is_some()
                || a.witness.is_some()
                || a.fresh_var.is_some()
                || a.cut_formula.is_some()
            {
                return Err(foreign("sequent calculus").into());
            }
            Ok(Args::Hoare(HoareArgs {
                mid: parse_field("mid", &a.mid, parse_formula)?,
                pre: parse_field("pre", &a.pre, parse_formula)?,
                post: parse_field("post", &a.post, parse_formula)?,
            }))
        }
    }
}

fn replay_step(
    tree: &ProofTree,
    step: &Step,
    recheck: Option<&dyn ValidityOracle>,
) -> Result<ProofTree, StepError> {
    let rule: Rule = step.rule.parse()?;
    if step.pseudo_axiom != rule.is_pseudo_axiom() {
        return Err(RuleError::SchemaMismatch(format!(
            "pseudoAxiom flag does not match rule {}",
            rule.name()
        ))
        .into());
    }
    if !rule.is_pseudo_axiom() {
        let args = rule_args(rule, &step.args)?;
        return Ok(tree.apply_at(&step.path, rule, args)?);
    }
    if step.args != StepArgs::default() {
        return Err(RuleError::SchemaMismatch("Z3Axiom takes no arguments".into()).into());
    }
    let node = tree.node(&step.path)?;
    let Goal::Lk(goal) = node.goal() else {
        return Err(RuleError::SchemaMismatch("Z3Axiom only closes sequent goals".into()).into());
    };
    if let Some(oracle) = recheck {
        if !node.is_hole() {
            return Err(TreeError::NotAHole(step.path.clone()).into());
        }
        match oracle.check(goal) {
            Ok(SmtVerdict::Valid) => {}
            Ok(v) => return Err(StepError::PseudoAxiom(v.to_string())),
            Err(e) => return Err(StepError::PseudoAxiom(e.to_string())),
        }
    }
    Ok(tree.close_pseudo_axiom(&step.path)?)
}

/// Rebuilds a tree from a script, re-running every rule check.
///
/// Solver closures are re-marked as pseudo-axioms without a solver call,
/// unless `recheck` is given; then each must come back valid.
pub fn replay(
    script: &ProofScript,
    recheck: Option<&dyn ValidityOracle>,
) -> Result<ProofTree, PersistError> {
    if script.version != FORMAT_VERSION {
        return Err(PersistError::VersionUnsupported(script.version.into()));
    }
    let mut tree = match script.goal_kind {
        GoalKind::Lk => {
            ProofTree::from_sequent(parse_sequent(&script.goal_text).map_err(PersistError::Parse)?)
        }
        GoalKind::Hoare => {
            ProofTree::from_triple(parse_triple(&script.goal_text).map_err(PersistError::Parse)?)
        }
    };
    for (i, step) in script.steps.iter().enumerate() {
        tree = replay_step(&tree, step, recheck)
            .map_err(|error| PersistError::Replay { step: i, error })?;
    }
    for p in &script.hidden_paths {
        tree = tree
            .set_hidden(p, true)
            .map_err(|e| PersistError::HiddenPath(p.clone(), e))?;
    }
    Ok(tree)
}

/// Parses file contents and replays them. See [`replay`].
pub fn load_proof(
    bytes: &[u8],
    recheck: Option<&dyn ValidityOracle>,
) -> Result<ProofTree, PersistError> {
    let value: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| PersistError::MalformedFile(e.to_string()))?;
    // Check the version first so a newer file is not reported as malformed.
    match value.get("version").and_then(serde_json::Value::as_u64) {
        Some(v) if v == u64::from(FORMAT_VERSION) => {}
        Some(v) => return Err(PersistError::VersionUnsupported(v)),
        None => {
            return Err(PersistError::MalformedFile(
                "missing integer field `version`".into(),
            ))
        }
    }
    let script: ProofScript =
        serde_json::from_value(value).map_err(|e| PersistError::MalformedFile(e.to_string()))?;
    replay(&script, recheck)
}

/// Whether a node closed as pseudo-axiom exists anywhere in the tree.
pub fn uses_pseudo_axiom(tree: &ProofTree) -> bool {
    let mut found = false;
    tree.visit(
        &mut NodePath::root(),
        &mut |_, n| {
            found |= matches!(n.status(), Status::Closed { rule, .. } if rule.is_pseudo_axiom())
        },
    );
    found
}

impl From<LkRule> for Step {
    fn from(rule: LkRule) -> Step {
        Step {
            path: NodePath::root(),
            rule: rule.name().to_string(),
            args: StepArgs::default(),
            pseudo_axiom: rule == LkRule::Z3Axiom,
        }
    }
}

//! Message types of the session protocol.
//!
//! A request is a JSON object with an `op` field and the operation's
//! arguments beside it. Over HTTP the `op` comes from the URL
//! (`POST /api/<op>`) and the body holds the rest. Every response is either
//! `{"ok": true, "result": …}` or `{"ok": false, "error": {…}}`.

use prooftree::auto::{Outcome, StuckReason};
use prooftree::lk::Position;
use prooftree::persist::{ProofScript, StepArgs};
use prooftree::smt::SmtVerdict;
use prooftree::tree::{Status, TreeError};
use prooftree::{NodePath, ProofTree, RuleError};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub type ProofId = u64;
pub type TicketId = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Learning,
    Automation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoalKindArg {
    Lk,
    Hoare,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(
    tag = "op",
    rename_all = "camelCase",
    rename_all_fields = "camelCase",
    deny_unknown_fields
)]
pub enum Request {
    CreateGoal {
        kind: GoalKindArg,
        text: String,
    },
    ParsePreview {
        /// sequent, triple, formula or term
        kind: String,
        text: String,
    },
    ListProofs {},
    GetProof {
        proof_id: ProofId,
    },
    ListApplicable {
        proof_id: ProofId,
        path: NodePath,
    },
    ApplyRule {
        proof_id: ProofId,
        path: NodePath,
        rule: String,
        #[serde(default)]
        args: StepArgs,
    },
    Prune {
        proof_id: ProofId,
        path: NodePath,
    },
    Detach {
        proof_id: ProofId,
        path: NodePath,
    },
    Attach {
        proof_id: ProofId,
        path: NodePath,
        source_proof_id: ProofId,
    },
    SetHidden {
        proof_id: ProofId,
        path: NodePath,
        hidden: bool,
    },
    Auto {
        proof_id: ProofId,
        path: NodePath,
        #[serde(default)]
        max_depth: Option<usize>,
    },
    Z3Check {
        proof_id: ProofId,
        path: NodePath,
        #[serde(default)]
        timeout_ms: Option<u64>,
    },
    Result {
        ticket: TicketId,
    },
    ExportLatex {
        proof_id: ProofId,
        #[serde(default)]
        standalone: bool,
    },
    Save {
        proof_id: ProofId,
    },
    Load {
        file: Value,
        #[serde(default)]
        recheck_z3: bool,
    },
    SetMode {
        mode: Mode,
    },
    DeleteProof {
        proof_id: ProofId,
    },
}

impl Request {
    /// Builds a request from an operation name and its argument object.
    pub fn from_parts(op: &str, args: Value) -> Result<Request, ProtocolError> {
        let mut obj = match args {
            Value::Object(m) => m,
            Value::Null => serde_json::Map::new(),
            _ => {
                return Err(ProtocolError::bad_request(
                    "request body must be a JSON object",
                ))
            }
        };
        obj.insert("op".into(), Value::String(op.into()));
        serde_json::from_value(Value::Object(obj))
            .map_err(|e| ProtocolError::bad_request(e.to_string()))
    }

    /// Whether the request changes the workspace.
    pub fn is_mutation(&self) -> bool {
        !matches!(
            self,
            Request::ParsePreview { .. }
                | Request::ListProofs {}
                | Request::GetProof { .. }
                | Request::ListApplicable { .. }
                | Request::Result { .. }
                | Request::ExportLatex { .. }
                | Request::Save { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCode {
    NotFound,
    NotAHole,
    RuleError,
    ParseError,
    SolverError,
    BadRequest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl ProtocolError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> ProtocolError {
        ProtocolError {
            code,
            message: message.into(),
            details: None,
        }
    }

    pub fn bad_request(message: impl Into<String>) -> ProtocolError {
        ProtocolError::new(ErrorCode::BadRequest, message)
    }

    pub fn with_details(mut self, details: Value) -> ProtocolError {
        self.details = Some(details);
        self
    }
}

impl std::fmt::Display for ProtocolError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {}",
            serde_json::to_value(self.code).unwrap().as_str().unwrap(),
            self.message
        )
    }
}

impl From<RuleError> for ProtocolError {
    fn from(e: RuleError) -> ProtocolError {
        let details = match &e {
            RuleError::AmbiguousPrincipal { candidates, .. } => {
                serde_json::json!({ "kind": e.kind(), "candidates": candidates })
            }
            _ => serde_json::json!({ "kind": e.kind() }),
        };
        ProtocolError::new(ErrorCode::RuleError, e.to_string()).with_details(details)
    }
}

impl From<TreeError> for ProtocolError {
    fn from(e: TreeError) -> ProtocolError {
        match e {
            TreeError::InvalidPath(_) => ProtocolError::new(ErrorCode::NotFound, e.to_string()),
            TreeError::NotAHole(_) => ProtocolError::new(ErrorCode::NotAHole, e.to_string()),
            TreeError::AlreadyHole(_) | TreeError::CannotDetachRoot => {
                ProtocolError::bad_request(e.to_string())
            }
            TreeError::GoalMismatch { .. } => {
                ProtocolError::new(ErrorCode::RuleError, e.to_string())
                    .with_details(serde_json::json!({ "kind": "goal-mismatch" }))
            }
            TreeError::Rule(r) => r.into(),
        }
    }
}

impl From<prooftree::ParseError> for ProtocolError {
    fn from(e: prooftree::ParseError) -> ProtocolError {
        ProtocolError::new(ErrorCode::ParseError, e.to_string())
            .with_details(serde_json::json!({ "line": e.line, "column": e.column }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Response {
    Ok { ok: True, result: Value },
    Err { ok: False, error: ProtocolError },
}

/// `true` as a type, so the two response shapes deserialize unambiguously.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct True;
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct False;

macro_rules! bool_literal {
    ($t:ident, $v:literal) => {
        impl Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_bool($v)
            }
        }
        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                match bool::deserialize(d)? {
                    $v => Ok($t),
                    _ => Err(serde::de::Error::custom(concat!(
                        "expected ",
                        stringify!($v)
                    ))),
                }
            }
        }
    };
}
bool_literal!(True, true);
bool_literal!(False, false);

impl Response {
    pub fn ok(result: Value) -> Response {
        Response::Ok { ok: True, result }
    }

    pub fn err(error: ProtocolError) -> Response {
        Response::Err { ok: False, error }
    }

    pub fn into_result(self) -> Result<Value, ProtocolError> {
        match self {
            Response::Ok { result, .. } => Ok(result),
            Response::Err { error, .. } => Err(error),
        }
    }
}

impl From<Result<Value, ProtocolError>> for Response {
    fn from(r: Result<Value, ProtocolError>) -> Response {
        match r {
            Ok(v) => Response::ok(v),
            Err(e) => Response::err(e),
        }
    }
}

/// One node as the client draws it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NodeSummary {
    pub id: u64,
    pub path: NodePath,
    pub goal: String,
    pub status: NodeStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    /// Text on the inference line: the rule name, or `Z3` for a solver
    /// closure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub pseudo_axiom: bool,
    pub hidden: bool,
    /// Whether the subtree rooted here has no holes.
    pub complete: bool,
    pub children: Vec<NodeSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeStatus {
    Hole,
    Closed,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeSummary {
    pub proof_id: ProofId,
    pub complete: bool,
    pub uses_pseudo_axiom: bool,
    pub holes: Vec<NodePath>,
    pub root: NodeSummary,
}

fn node_summary(tree: &ProofTree, path: &mut NodePath) -> NodeSummary {
    let status = match tree.status() {
        Status::Hole => NodeStatus::Hole,
        Status::Closed { .. } => NodeStatus::Closed,
        Status::Derived { .. } => NodeStatus::Derived,
    };
    let rule = tree.rule();
    let children = tree
        .children()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            path.0.push(i);
            let s = node_summary(c, path);
            path.0.pop();
            s
        })
        .collect();
    NodeSummary {
        id: tree.id().get(),
        path: path.clone(),
        goal: tree.goal().to_string(),
        status,
        rule: rule.map(|r| r.name().to_string()),
        label: rule.map(|r| {
            if r.is_pseudo_axiom() {
                "Z3".to_string()
            } else {
                r.name().to_string()
            }
        }),
        pseudo_axiom: tree.is_pseudo_axiom(),
        hidden: tree.is_hidden(),
        complete: tree.is_complete(),
        children,
    }
}

pub fn summarize(id: ProofId, tree: &ProofTree) -> TreeSummary {
    TreeSummary {
        proof_id: id,
        complete: tree.is_complete(),
        uses_pseudo_axiom: prooftree::persist::uses_pseudo_axiom(tree),
        holes: tree.holes().into_iter().map(|(p, _)| p).collect(),
        root: node_summary(tree, &mut NodePath::root()),
    }
}

/// Which argument fields a menu entry needs from the user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ArgField {
    Principal,
    Witness,
    FreshVar,
    CutFormula,
    Mid,
    Pre,
    Post,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    /// Send `applyRule` with `rule`.
    Rule,
    /// Send `auto`.
    Auto,
    /// Send `z3Check`.
    Z3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MenuEntry {
    /// Button text.
    pub name: String,
    pub action: Action,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    /// Formulas the rule can act on; more than one means the user picks.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Position>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub needs: Vec<ArgField>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "state")]
pub enum AutoOutcome {
    Completed,
    Stuck {
        path: NodePath,
        reason: String,
        message: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        rule: Option<String>,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        candidates: Vec<Position>,
    },
}

impl From<&Outcome> for AutoOutcome {
    fn from(o: &Outcome) -> AutoOutcome {
        match o {
            Outcome::Completed => AutoOutcome::Completed,
            Outcome::Stuck { path, reason } => {
                let (tag, rule, candidates) = match reason {
                    StuckReason::Ambiguous { rule, candidates } => (
                        "ambiguous",
                        Some(rule.name().to_string()),
                        candidates.clone(),
                    ),
                    StuckReason::NoRule => ("no-rule", None, vec![]),
                    StuckReason::DepthLimit => ("depth-limit", None, vec![]),
                    StuckReason::Cancelled => ("cancelled", None, vec![]),
                };
                AutoOutcome::Stuck {
                    path: path.clone(),
                    reason: tag.into(),
                    message: reason.to_string(),
                    rule,
                    candidates,
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase", tag = "state")]
pub enum TicketState {
    Pending,
    Done {
        verdict: SmtVerdict,
        /// Whether the hole was closed. False when the verdict is not
        /// valid or the hole changed while the solver ran.
        closed: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Failed {
        error: ProtocolError,
    },
    Cancelled,
}

/// Save payload: the script as it would be written to a file.
pub fn save_payload(script: &ProofScript) -> Value {
    serde_json::to_value(script).expect("scripts serialize")
}

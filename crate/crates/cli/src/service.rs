//! The session workspace and the request dispatcher.
//!
//! Mutations take the write lock, so they run one at a time in arrival
//! order; reads share the lock. Solver checks run on their own threads and
//! report through tickets.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex, MutexGuard, RwLock, RwLockReadGuard, RwLockWriteGuard};
use std::time::{Duration, Instant};

use prooftree::auto::{auto_at, AutoError, Limits, DEFAULT_MAX_DEPTH};
use prooftree::hoare::{applicable_hoare, HoareRule};
use prooftree::latex::{to_latex, to_latex_document};
use prooftree::lk::{applicable_lk, LkRule};
use prooftree::persist::{load_proof, save_proof, PersistError, StepError};
use prooftree::smt::{
    apply_verdict, check_validity_with, SmtError, Solver, SolverConfig, DEFAULT_TIMEOUT,
};
use prooftree::{
    parse_preview, parse_sequent, parse_triple, Goal, NodePath, ProofTree, Rule, SyntaxKind,
};
use serde_json::{json, Value};

use crate::protocol::{
    save_payload, summarize, Action, ArgField, ErrorCode, GoalKindArg, MenuEntry, Mode, ProofId,
    ProtocolError, Request, Response, TicketId, TicketState,
};

#[derive(Debug, Clone)]
pub struct Workspace {
    proofs: BTreeMap<ProofId, ProofTree>,
    mode: Mode,
    next_id: ProofId,
}

impl Default for Workspace {
    fn default() -> Self {
        Workspace {
            proofs: BTreeMap::new(),
            mode: Mode::Learning,
            next_id: 1,
        }
    }
}

impl Workspace {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn proofs(&self) -> &BTreeMap<ProofId, ProofTree> {
        &self.proofs
    }

    pub fn get(&self, id: ProofId) -> Result<&ProofTree, ProtocolError> {
        self.proofs.get(&id).ok_or_else(|| {
            ProtocolError::new(ErrorCode::NotFound, format!("no proof with id {id}"))
        })
    }

    fn insert(&mut self, tree: ProofTree) -> ProofId {
        let id = self.next_id;
        self.next_id += 1;
        self.proofs.insert(id, tree);
        id
    }

    fn replace(&mut self, id: ProofId, tree: ProofTree) -> Value {
        let summary = summarize(id, &tree);
        self.proofs.insert(id, tree);
        json!({ "tree": summary })
    }

    /// Menu for the hole at `path`.
    pub fn menu(&self, id: ProofId, path: &NodePath) -> Result<Vec<MenuEntry>, ProtocolError> {
        let node = self.get(id)?.node(path)?;
        if !node.is_hole() {
            return Err(ProtocolError::new(
                ErrorCode::NotAHole,
                format!("node at {path} is not a hole"),
            ));
        }
        Ok(menu(node.goal(), self.mode))
    }
}

fn lk_needs(rule: LkRule) -> Vec<ArgField> {
    let mut needs = Vec::new();
    if rule.principal_side().is_some() {
        needs.push(ArgField::Principal);
    }
    match rule {
        LkRule::ForallL | LkRule::ExistsR => needs.push(ArgField::Witness),
        LkRule::ForallR | LkRule::ExistsL => needs.push(ArgField::FreshVar),
        LkRule::Cut => needs.push(ArgField::CutFormula),
        _ => {}
    }
    needs
}

fn hoare_needs(rule: HoareRule) -> Vec<ArgField> {
    match rule {
        HoareRule::HSeq => vec![ArgField::Mid],
        HoareRule::HConseq => vec![ArgField::Pre, ArgField::Post],
        _ => vec![],
    }
}

fn z3_entry() -> MenuEntry {
    MenuEntry {
        name: "Z3".into(),
        action: Action::Z3,
        rule: None,
        candidates: vec![],
        needs: vec![],
    }
}

fn lk_entry(rule: LkRule, candidates: Vec<prooftree::lk::Position>) -> MenuEntry {
    if rule == LkRule::Z3Axiom {
        return z3_entry();
    }
    MenuEntry {
        name: rule.name().into(),
        action: Action::Rule,
        rule: Some(rule.name().into()),
        candidates,
        needs: lk_needs(rule),
    }
}

fn hoare_entry(rule: HoareRule) -> MenuEntry {
    MenuEntry {
        name: rule.name().into(),
        action: Action::Rule,
        rule: Some(rule.name().into()),
        candidates: vec![],
        needs: hoare_needs(rule),
    }
}

/// Learning mode lists every rule of the goal's calculus. Automation mode
/// lists the applicable ones, then `Auto` and `Z3` for sequents.
pub fn menu(goal: &Goal, mode: Mode) -> Vec<MenuEntry> {
    match (goal, mode) {
        (Goal::Lk(s), Mode::Learning) => LkRule::ALL
            .iter()
            .map(|&r| lk_entry(r, prooftree::lk::candidates(s, r)))
            .collect(),
        (Goal::Lk(s), Mode::Automation) => {
            let mut out: Vec<MenuEntry> = applicable_lk(s)
                .into_iter()
                .filter(|(r, _)| *r != LkRule::Z3Axiom)
                .map(|(r, c)| lk_entry(r, c))
                .collect();
            out.push(MenuEntry {
                name: "Auto".into(),
                action: Action::Auto,
                rule: None,
                candidates: vec![],
                needs: vec![],
            });
            out.push(z3_entry());
            out
        }
        (Goal::Hoare(_), Mode::Learning) => {
            HoareRule::ALL.iter().map(|&r| hoare_entry(r)).collect()
        }
        (Goal::Hoare(t), Mode::Automation) => {
            applicable_hoare(t).into_iter().map(hoare_entry).collect()
        }
    }
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub solver: SolverConfig,
    pub timeout: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            solver: SolverConfig::default(),
            timeout: DEFAULT_TIMEOUT,
        }
    }
}

struct Ticket {
    proof_id: ProofId,
    state: TicketState,
    cancel: Arc<AtomicBool>,
}

struct Shared {
    workspace: RwLock<Workspace>,
    tickets: Mutex<BTreeMap<TicketId, Ticket>>,
    next_ticket: AtomicU64,
    config: ServiceConfig,
}

/// Cheap to clone; clones share the workspace.
#[derive(Clone)]
pub struct Service {
    shared: Arc<Shared>,
}

fn persist_error(e: PersistError) -> ProtocolError {
    match e {
        PersistError::MalformedFile(_) | PersistError::VersionUnsupported(_) => {
            ProtocolError::bad_request(e.to_string())
        }
        PersistError::Parse(p) => p.into(),
        PersistError::Replay { step, ref error } => {
            let code = match error {
                StepError::Parse { .. } => ErrorCode::ParseError,
                StepError::PseudoAxiom(_) => ErrorCode::SolverError,
                StepError::Tree(_) => ErrorCode::RuleError,
            };
            ProtocolError::new(code, e.to_string()).with_details(json!({ "step": step }))
        }
        PersistError::HiddenPath(..) => ProtocolError::bad_request(e.to_string()),
    }
}

fn step_error(e: StepError) -> ProtocolError {
    match e {
        StepError::Parse { field, error, .. } => {
            let mut err: ProtocolError = error.into();
            if let Some(Value::Object(d)) = err.details.as_mut() {
                d.insert("field".into(), json!(field));
            }
            err
        }
        StepError::Tree(t) => t.into(),
        StepError::PseudoAxiom(m) => ProtocolError::new(ErrorCode::SolverError, m),
    }
}

impl Service {
    pub fn new(config: ServiceConfig) -> Service {
        Service {
            shared: Arc::new(Shared {
                workspace: RwLock::new(Workspace::default()),
                tickets: Mutex::new(BTreeMap::new()),
                next_ticket: AtomicU64::new(1),
                config,
            }),
        }
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.shared.config
    }

    fn read(&self) -> RwLockReadGuard<'_, Workspace> {
        self.shared
            .workspace
            .read()
            .unwrap_or_else(|p| p.into_inner())
    }

    fn write(&self) -> RwLockWriteGuard<'_, Workspace> {
        self.shared
            .workspace
            .write()
            .unwrap_or_else(|p| p.into_inner())
    }

    fn tickets(&self) -> MutexGuard<'_, BTreeMap<TicketId, Ticket>> {
        self.shared
            .tickets
            .lock()
            .unwrap_or_else(|p| p.into_inner())
    }

    /// A copy of the current workspace.
    pub fn snapshot(&self) -> Workspace {
        self.read().clone()
    }

    /// Runs one request. Never panics: a bug in an operation comes back as
    /// an error response.
    pub fn handle(&self, request: Request) -> Response {
        match catch_unwind(AssertUnwindSafe(|| self.dispatch(request))) {
            Ok(r) => r.into(),
            Err(_) => Response::err(ProtocolError::bad_request(
                "internal error while handling the request",
            )),
        }
    }

    /// [`handle`](Self::handle) with the response unwrapped.
    pub fn call(&self, request: Request) -> Result<Value, ProtocolError> {
        self.handle(request).into_result()
    }

    fn dispatch(&self, request: Request) -> Result<Value, ProtocolError> {
        match request {
            Request::CreateGoal { kind, text } => {
                let goal = match kind {
                    GoalKindArg::Lk => Goal::Lk(parse_sequent(&text)?),
                    GoalKindArg::Hoare => Goal::Hoare(parse_triple(&text)?),
                };
                let mut ws = self.write();
                let tree = ProofTree::new(goal);
                let id = ws.insert(tree.clone());
                Ok(json!({ "proofId": id, "tree": summarize(id, &tree) }))
            }
            Request::ParsePreview { kind, text } => {
                let k: SyntaxKind = kind.parse().map_err(ProtocolError::bad_request)?;
                let parsed = parse_preview(&text, k)?;
                Ok(json!({ "canonical": parsed.canonical_text() }))
            }
            Request::ListProofs {} => {
                let ws = self.read();
                let proofs: Vec<Value> = ws
                    .proofs
                    .iter()
                    .map(|(id, t)| json!({ "proofId": id, "goal": t.goal().to_string(), "complete": t.is_complete() }))
                    .collect();
                Ok(json!({ "mode": ws.mode, "proofs": proofs }))
            }
            Request::GetProof { proof_id } => {
                let ws = self.read();
                Ok(json!({ "tree": summarize(proof_id, ws.get(proof_id)?) }))
            }
            Request::ListApplicable { proof_id, path } => {
                let ws = self.read();
                let entries = ws.menu(proof_id, &path)?;
                Ok(json!({ "mode": ws.mode, "entries": entries }))
            }
            Request::ApplyRule {
                proof_id,
                path,
                rule,
                args,
            } => {
                let rule: Rule = rule.parse()?;
                let args = args.resolve(rule).map_err(step_error)?;
                let mut ws = self.write();
                let tree = ws.get(proof_id)?.apply_at(&path, rule, args)?;
                Ok(ws.replace(proof_id, tree))
            }
            Request::Prune { proof_id, path } => {
                let mut ws = self.write();
                let tree = ws.get(proof_id)?.prune_at(&path)?;
                Ok(ws.replace(proof_id, tree))
            }
            Request::Detach { proof_id, path } => {
                let mut ws = self.write();
                let (rest, sub) = ws.get(proof_id)?.detach_at(&path)?;
                let new_id = ws.insert(sub.clone());
                let mut out = ws.replace(proof_id, rest);
                out["detached"] = json!(summarize(new_id, &sub));
                Ok(out)
            }
            Request::Attach {
                proof_id,
                path,
                source_proof_id,
            } => {
                if proof_id == source_proof_id {
                    return Err(ProtocolError::bad_request(
                        "a proof cannot be attached to itself",
                    ));
                }
                let mut ws = self.write();
                let source = ws.get(source_proof_id)?.clone();
                let tree = ws.get(proof_id)?.attach_at(&path, &source)?;
                ws.proofs.remove(&source_proof_id);
                self.cancel_tickets(source_proof_id);
                let mut out = ws.replace(proof_id, tree);
                out["removedProofId"] = json!(source_proof_id);
                Ok(out)
            }
            Request::SetHidden {
                proof_id,
                path,
                hidden,
            } => {
                let mut ws = self.write();
                let tree = ws.get(proof_id)?.set_hidden(&path, hidden)?;
                Ok(ws.replace(proof_id, tree))
            }
            Request::Auto {
                proof_id,
                path,
                max_depth,
            } => {
                let mut ws = self.write();
                let limits = Limits::depth(max_depth.unwrap_or(DEFAULT_MAX_DEPTH));
                let result = auto_at(ws.get(proof_id)?, &path, limits).map_err(|e| match e {
                    AutoError::NotLkGoal => ProtocolError::bad_request(e.to_string()),
                    AutoError::Tree(t) => t.into(),
                })?;
                let outcome = crate::protocol::AutoOutcome::from(&result.outcome);
                let mut out = ws.replace(proof_id, result.tree);
                out["outcome"] = json!(outcome);
                out["steps"] = json!(result.steps);
                Ok(out)
            }
            Request::Z3Check {
                proof_id,
                path,
                timeout_ms,
            } => self.start_check(proof_id, path, timeout_ms),
            Request::Result { ticket } => self.ticket_result(ticket),
            Request::ExportLatex {
                proof_id,
                standalone,
            } => {
                let ws = self.read();
                let tree = ws.get(proof_id)?;
                let latex = if standalone {
                    to_latex_document(tree)
                } else {
                    to_latex(tree)
                };
                Ok(json!({ "latex": latex }))
            }
            Request::Save { proof_id } => {
                let ws = self.read();
                Ok(json!({ "file": save_payload(&save_proof(ws.get(proof_id)?)) }))
            }
            Request::Load { file, recheck_z3 } => {
                let bytes = serde_json::to_vec(&file).expect("values serialize");
                let solver = Solver::new(self.shared.config.solver.clone())
                    .with_timeout(self.shared.config.timeout);
                let oracle: Option<&dyn prooftree::smt::ValidityOracle> =
                    if recheck_z3 { Some(&solver) } else { None };
                let tree = load_proof(&bytes, oracle).map_err(persist_error)?;
                let mut ws = self.write();
                let id = ws.insert(tree.clone());
                Ok(json!({ "proofId": id, "tree": summarize(id, &tree) }))
            }
            Request::SetMode { mode } => {
                self.write().mode = mode;
                Ok(json!({ "mode": mode }))
            }
            Request::DeleteProof { proof_id } => {
                let mut ws = self.write();
                ws.get(proof_id)?;
                ws.proofs.remove(&proof_id);
                self.cancel_tickets(proof_id);
                Ok(json!({ "deleted": proof_id }))
            }
        }
    }

    fn cancel_tickets(&self, proof_id: ProofId) {
        for t in self.tickets().values_mut() {
            if t.proof_id == proof_id {
                t.cancel.store(true, Ordering::Relaxed);
                if matches!(t.state, TicketState::Pending) {
                    t.state = TicketState::Cancelled;
                }
            }
        }
    }

    fn start_check(
        &self,
        proof_id: ProofId,
        path: NodePath,
        timeout_ms: Option<u64>,
    ) -> Result<Value, ProtocolError> {
        let goal = {
            let ws = self.read();
            let node = ws.get(proof_id)?.node(&path)?;
            if !node.is_hole() {
                return Err(ProtocolError::new(
                    ErrorCode::NotAHole,
                    format!("node at {path} is not a hole"),
                ));
            }
            match node.goal() {
                Goal::Lk(s) => s.clone(),
                Goal::Hoare(_) => {
                    return Err(ProtocolError::bad_request(
                        "the solver only checks sequent goals",
                    ));
                }
            }
        };
        let ticket = self.shared.next_ticket.fetch_add(1, Ordering::Relaxed);
        let cancel = Arc::new(AtomicBool::new(false));
        self.tickets().insert(
            ticket,
            Ticket {
                proof_id,
                state: TicketState::Pending,
                cancel: cancel.clone(),
            },
        );
        let timeout = timeout_ms.map_or(self.shared.config.timeout, Duration::from_millis);
        let service = self.clone();
        std::thread::spawn(move || {
            let result =
                check_validity_with(&goal, &service.shared.config.solver, timeout, Some(&cancel));
            service.finish_check(ticket, proof_id, &path, &goal, result);
        });
        Ok(json!({ "ticket": ticket }))
    }

    fn finish_check(
        &self,
        ticket: TicketId,
        proof_id: ProofId,
        path: &NodePath,
        goal: &prooftree::Sequent,
        result: Result<prooftree::smt::SmtVerdict, SmtError>,
    ) {
        // workspace before tickets, the same order as deleteProof
        let mut ws = self.write();
        let mut tickets = self.tickets();
        let Some(entry) = tickets.get_mut(&ticket) else {
            return;
        };
        if entry.cancel.load(Ordering::Relaxed) {
            entry.state = TicketState::Cancelled;
            return;
        }
        entry.state = match result {
            Err(e) => TicketState::Failed {
                error: ProtocolError::new(ErrorCode::SolverError, e.to_string()),
            },
            Ok(verdict) => {
                let (closed, note) = match ws.proofs.get(&proof_id) {
                    None => (false, Some(format!("proof {proof_id} no longer exists"))),
                    Some(tree) => match apply_verdict(tree, path, goal, &verdict) {
                        Ok(t) if verdict.is_valid() => {
                            ws.proofs.insert(proof_id, t);
                            (true, None)
                        }
                        Ok(_) => (false, None),
                        Err(e) => (false, Some(e.to_string())),
                    },
                };
                TicketState::Done {
                    verdict,
                    closed,
                    note,
                }
            }
        };
    }

    fn ticket_result(&self, ticket: TicketId) -> Result<Value, ProtocolError> {
        let ws = self.read();
        let tickets = self.tickets();
        let entry = tickets.get(&ticket).ok_or_else(|| {
            ProtocolError::new(ErrorCode::NotFound, format!("no ticket {ticket}"))
        })?;
        let mut out = serde_json::to_value(&entry.state).expect("states serialize");
        out["ticket"] = json!(ticket);
        out["proofId"] = json!(entry.proof_id);
        if let (TicketState::Done { .. }, Some(tree)) =
            (&entry.state, ws.proofs.get(&entry.proof_id))
        {
            out["tree"] = json!(summarize(entry.proof_id, tree));
        }
        Ok(out)
    }

    /// Polls a ticket until it leaves the pending state or `limit` passes.
    pub fn wait(&self, ticket: TicketId, limit: Duration) -> Result<Value, ProtocolError> {
        let start = Instant::now();
        loop {
            let v = self.ticket_result(ticket)?;
            if v["state"] != "pending" || start.elapsed() > limit {
                return Ok(v);
            }
            std::thread::sleep(Duration::from_millis(5));
        }
    }
}

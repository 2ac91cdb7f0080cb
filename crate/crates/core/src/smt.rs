//! The Z3 pseudo-axiom: SMT-LIB2 encoding of a negated sequent, an external
//! solver process, verdicts and countermodels.
//!
//! A sequent `Γ ⊢ Δ` is valid iff `Γ ∧ ¬δ₁ ∧ … ∧ ¬δₙ` is unsatisfiable, so
//! the script asserts every antecedent and the negation of every succedent.
//! Every term is an integer.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::{Command as Process, Stdio};
use std::sync::atomic::{AtomicBool, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::rule::Goal;
use crate::syntax::{
    ArithOp, Formula, RelOp, Sequent, Signature, SignatureError, SymbolRole, Term,
};
use crate::tree::{NodePath, ProofTree, TreeError};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(5);

/// Environment variable holding the solver executable.
pub const SOLVER_ENV: &str = "PROOFTREE_SOLVER";

// Identifiers that mean something to the solver. Declaring them would clash
// with a builtin of the same sort or break the syntax, so they get renamed.
const RESERVED: &[&str] = &[
    "_",
    "abs",
    "and",
    "as",
    "assert",
    "bvadd",
    "bvmul",
    "bvneg",
    "bvsub",
    "concat",
    "cos",
    "declare",
    "distinct",
    "div",
    "divisible",
    "exists",
    "exp",
    "extract",
    "false",
    "forall",
    "iff",
    "implies",
    "is_int",
    "ite",
    "lambda",
    "let",
    "match",
    "mod",
    "not",
    "or",
    "par",
    "pi",
    "rem",
    "select",
    "sin",
    "store",
    "tan",
    "to_int",
    "to_real",
    "true",
    "xor",
    "Array",
    "Bool",
    "DECIMAL",
    "Int",
    "NUMERAL",
    "Real",
    "STRING",
];

const MANGLE_SUFFIX: &str = "!u";

fn smt_name(name: &str) -> String {
    if RESERVED.contains(&name) {
        format!("{name}{MANGLE_SUFFIX}")
    } else {
        name.to_string()
    }
}

fn user_name(symbol: &str) -> &str {
    let bare = symbol
        .strip_prefix('|')
        .and_then(|s| s.strip_suffix('|'))
        .unwrap_or(symbol);
    match bare.strip_suffix(MANGLE_SUFFIX) {
        Some(base) if RESERVED.contains(&base) => base,
        _ => bare,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmtError {
    #[error("SMT solver not found: {0}")]
    SolverNotFound(String),
    #[error("could not run the SMT solver: {0}")]
    Io(String),
    #[error("cannot encode goal: {0}")]
    ArityConflict(#[from] SignatureError),
}

// ---------------------------------------------------------------------------
// Encoding

fn write_int(n: i64, out: &mut String) {
    if n < 0 {
        // i64::MIN has no positive counterpart in i64
        out.push_str(&format!("(- {})", (n as i128).unsigned_abs()));
    } else {
        out.push_str(&n.to_string());
    }
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&smt_name(v)),
        Term::Int(n) => write_int(*n, out),
        Term::Arith(op, a, b) => {
            let sym = match op {
                ArithOp::Add => "+",
                ArithOp::Sub => "-",
                ArithOp::Mul => "*",
            };
            out.push('(');
            out.push_str(sym);
            out.push(' ');
            write_term(a, out);
            out.push(' ');
            write_term(b, out);
            out.push(')');
        }
        Term::App(f, args) => {
            out.push('(');
            out.push_str(&smt_name(f));
            for a in args {
                out.push(' ');
                write_term(a, out);
            }
            out.push(')');
        }
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    let node = |head: &str, parts: &[&Formula], out: &mut String| {
        out.push('(');
        out.push_str(head);
        for p in parts {
            out.push(' ');
            write_formula(p, out);
        }
        out.push(')');
    };
    match f {
        Formula::Pred(p, args) if args.is_empty() => out.push_str(&smt_name(p)),
        Formula::Pred(p, args) => {
            out.push('(');
            out.push_str(&smt_name(p));
            for a in args {
                out.push(' ');
                write_term(a, out);
            }
            out.push(')');
        }
        Formula::Rel(op, a, b) => {
            let sym = match op {
                RelOp::Eq => "=",
                RelOp::Lt => "<",
                RelOp::Le => "<=",
                RelOp::Gt => ">",
                RelOp::Ge => ">=",
            };
            out.push('(');
            out.push_str(sym);
            out.push(' ');
            write_term(a, out);
            out.push(' ');
            write_term(b, out);
            out.push(')');
        }
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Not(a) => node("not", &[a], out),
        Formula::And(a, b) => node("and", &[a, b], out),
        Formula::Or(a, b) => node("or", &[a, b], out),
        Formula::Implies(a, b) => node("=>", &[a, b], out),
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let q = if matches!(f, Formula::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            out.push_str(&format!("({q} (({} Int)) ", smt_name(x)));
            write_formula(body, out);
            out.push(')');
        }
    }
}

/// Symbols a goal needs declared, keyed by their name in the goal.
fn declarations(goal: &Sequent) -> Result<BTreeMap<String, SymbolRole>, SmtError> {
    let sig = Signature::of_sequent(goal)?;
    let free = goal.free_vars();
    Ok(sig
        .roles()
        .iter()
        .filter(|(name, role)| **role != SymbolRole::Variable || free.contains(*name))
        .map(|(n, r)| (n.clone(), *r))
        .collect())
}

fn sort_list(n: usize) -> String {
    vec!["Int"; n].join(" ")
}

/// SMT-LIB2 script whose satisfiability refutes the sequent. Symbols are
/// declared in lexicographic order, so equal goals give identical scripts.
pub fn encode_sequent(goal: &Sequent) -> Result<String, SmtError> {
    let mut out = String::from("(set-option :produce-models true)\n(set-logic ALL)\n");
    for (name, role) in declarations(goal)? {
        let name = smt_name(&name);
        let line = match role {
            SymbolRole::Predicate(0) => format!("(declare-const {name} Bool)"),
            SymbolRole::Predicate(n) => format!("(declare-fun {name} ({}) Bool)", sort_list(n)),
            SymbolRole::Variable => format!("(declare-const {name} Int)"),
            SymbolRole::Function(n) => format!("(declare-fun {name} ({}) Int)", sort_list(n)),
        };
        out.push_str(&line);
        out.push('\n');
    }
    for f in &goal.left {
        out.push_str("(assert ");
        write_formula(f, &mut out);
        out.push_str(")\n");
    }
    for f in &goal.right {
        out.push_str("(assert (not ");
        write_formula(f, &mut out);
        out.push_str("))\n");
    }
    out.push_str("(check-sat)\n(get-model)\n");
    Ok(out)
}

// ---------------------------------------------------------------------------
// Countermodels

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => b.fmt(f),
            Value::Int(n) => n.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub args: Vec<i64>,
    pub value: Value,
}

/// Interpretation of a function or predicate symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Interpretation {
    /// Finitely many explicit points and a value everywhere else.
    Table {
        entries: Vec<TableEntry>,
        default: Value,
    },
    /// The solver's definition, kept as text because it is not a table.
    Verbatim { text: String },
}

impl Interpretation {
    pub fn apply(&self, args: &[i64]) -> Option<Value> {
        match self {
            Interpretation::Table { entries, default } => Some(
                entries
                    .iter()
                    .find(|e| e.args == args)
                    .map_or(*default, |e| e.value),
            ),
            Interpretation::Verbatim { .. } => None,
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interpretation::Table { entries, default } => {
                f.write_str("{")?;
                for e in entries {
                    let args: Vec<String> = e.args.iter().map(i64::to_string).collect();
                    write!(f, "({}) -> {}, ", args.join(", "), e.value)?;
                }
                write!(f, "else -> {default}}}")
            }
            Interpretation::Verbatim { text } => f.write_str(text),
        }
    }
}

/// An interpretation under which every antecedent holds and every
/// succedent fails. Only symbols of the goal appear.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Countermodel {
    pub bool_atoms: BTreeMap<String, bool>,
    pub int_vars: BTreeMap<String, i64>,
    /// Integer variables whose value does not fit in 64 bits, as decimal text.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub large_ints: BTreeMap<String, String>,
    pub functions: BTreeMap<String, Interpretation>,
}

impl Countermodel {
    pub fn is_empty(&self) -> bool {
        self.bool_atoms.is_empty()
            && self.int_vars.is_empty()
            && self.large_ints.is_empty()
            && self.functions.is_empty()
    }

    /// Value of a quantifier-free term. Symbols the solver left out are 0;
    /// `None` on overflow, a large integer or a verbatim interpretation.
    pub fn eval_term(&self, t: &Term) -> Option<i64> {
        match t {
            Term::Var(v) if self.large_ints.contains_key(v) => None,
            Term::Var(v) => Some(self.int_vars.get(v).copied().unwrap_or(0)),
            Term::Int(n) => Some(*n),
            Term::Arith(op, a, b) => {
                let (a, b) = (self.eval_term(a)?, self.eval_term(b)?);
                match op {
                    ArithOp::Add => a.checked_add(b),
                    ArithOp::Sub => a.checked_sub(b),
                    ArithOp::Mul => a.checked_mul(b),
                }
            }
            Term::App(f, args) => {
                let args = args
                    .iter()
                    .map(|a| self.eval_term(a))
                    .collect::<Option<Vec<_>>>()?;
                match self.functions.get(f) {
                    None => Some(0),
                    Some(i) => match i.apply(&args)? {
                        Value::Int(n) => Some(n),
                        Value::Bool(_) => None,
                    },
                }
            }
        }
    }

    /// Truth value of a quantifier-free formula; `None` for quantifiers.
    /// Atoms the solver left out are false.
    pub fn eval_formula(&self, f: &Formula) -> Option<bool> {
        Some(match f {
            Formula::Pred(p, args) if args.is_empty() => {
                self.bool_atoms.get(p).copied().unwrap_or(false)
            }
            Formula::Pred(p, args) => {
                let args = args
                    .iter()
                    .map(|a| self.eval_term(a))
                    .collect::<Option<Vec<_>>>()?;
                match self.functions.get(p) {
                    None => false,
                    Some(i) => match i.apply(&args)? {
                        Value::Bool(b) => b,
                        Value::Int(_) => return None,
                    },
                }
            }
            Formula::Rel(op, a, b) => {
                let (a, b) = (self.eval_term(a)?, self.eval_term(b)?);
                match op {
                    RelOp::Eq => a == b,
                    RelOp::Lt => a < b,
                    RelOp::Le => a <= b,
                    RelOp::Gt => a > b,
                    RelOp::Ge => a >= b,
                }
            }
            Formula::True => true,
            Formula::False => false,
            Formula::Not(a) => !self.eval_formula(a)?,
            Formula::And(a, b) => self.eval_formula(a)? && self.eval_formula(b)?,
            Formula::Or(a, b) => self.eval_formula(a)? || self.eval_formula(b)?,
            Formula::Implies(a, b) => !self.eval_formula(a)? || self.eval_formula(b)?,
            Formula::Forall(..) | Formula::Exists(..) => return None,
        })
    }

    /// Whether the model makes every antecedent true and every succedent
    /// false. `None` if some formula cannot be evaluated.
    pub fn refutes(&self, goal: &Sequent) -> Option<bool> {
        for f in &goal.left {
            if !self.eval_formula(f)? {
                return Some(false);
            }
        }
        for f in &goal.right {
            if self.eval_formula(f)? {
                return Some(false);
            }
        }
        Some(true)
    }
}

impl fmt::Display for Countermodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        parts.extend(self.bool_atoms.iter().map(|(k, v)| format!("{k}={v}")));
        parts.extend(self.int_vars.iter().map(|(k, v)| format!("{k}={v}")));
        parts.extend(self.large_ints.iter().map(|(k, v)| format!("{k}={v}")));
        parts.extend(self.functions.iter().map(|(k, v)| format!("{k}={v}")));
        if parts.is_empty() {
            f.write_str("(empty model)")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

// ---------------------------------------------------------------------------
// S-expressions

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => f.write_str(a),
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    it.fmt(f)?;
                }
                f.write_str(")")
            }
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<String>, String> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            ';' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
            }
            '(' | ')' => {
                tokens.push(c.to_string());
                chars.next();
            }
            '|' | '"' => {
                let mut tok = String::from(c);
                chars.next();
                loop {
                    let Some(d) = chars.next() else {
                        return Err("unterminated quoted token".into());
                    };
                    tok.push(d);
                    if d == c {
                        // "" inside a string literal is an escaped quote
                        if c == '"' && chars.peek() == Some(&'"') {
                            tok.push('"');
                            chars.next();
                            continue;
                        }
                        break;
                    }
                }
                tokens.push(tok);
            }
            _ => {
                let mut tok = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_whitespace() || d == '(' || d == ')' || d == ';' {
                        break;
                    }
                    tok.push(d);
                    chars.next();
                }
                tokens.push(tok);
            }
        }
    }
    Ok(tokens)
}

fn parse_sexps(text: &str) -> Result<Vec<Sexp>, String> {
    let tokens = tokenize(text)?;
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    for tok in tokens {
        match tok.as_str() {
            "(" => stack.push(Vec::new()),
            ")" => {
                let done = stack.pop().expect("stack starts nonempty");
                let Some(parent) = stack.last_mut() else {
                    return Err("unbalanced ')'".into());
                };
                parent.push(Sexp::List(done));
            }
            _ => stack.last_mut().expect("nonempty").push(Sexp::Atom(tok)),
        }
    }
    if stack.len() != 1 {
        return Err("unbalanced '('".into());
    }
    Ok(stack.pop().expect("checked"))
}

fn parse_value(s: &Sexp) -> Option<Value> {
    match s {
        Sexp::Atom(a) if a == "true" => Some(Value::Bool(true)),
        Sexp::Atom(a) if a == "false" => Some(Value::Bool(false)),
        Sexp::Atom(a) => a
            .parse::<i64>()
            .ok()
            .filter(|_| a.bytes().all(|b| b.is_ascii_digit()))
            .map(Value::Int),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(minus), Sexp::Atom(n)]
                if minus == "-" && n.bytes().all(|b| b.is_ascii_digit()) =>
            {
                let n: i128 = n.parse().ok()?;
                i64::try_from(-n).ok().map(Value::Int)
            }
            _ => None,
        },
    }
}

/// Decimal text of an integer literal of any size.
fn big_int(s: &Sexp) -> Option<String> {
    let digits = |n: &str| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit());
    match s {
        Sexp::Atom(n) if digits(n) => Some(n.clone()),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(minus), Sexp::Atom(n)] if minus == "-" && digits(n) => {
                Some(format!("-{n}"))
            }
            _ => None,
        },
        _ => None,
    }
}

fn parse_int(s: &Sexp) -> Option<i64> {
    match parse_value(s)? {
        Value::Int(n) => Some(n),
        Value::Bool(_) => None,
    }
}

/// Reads `(and (= x!0 a) (= x!1 b))` or `(= x!0 a)` into argument values.
fn parse_point(cond: &Sexp, params: &[String]) -> Option<Vec<i64>> {
    let conjuncts: Vec<&Sexp> = match cond {
        Sexp::List(items) if items.first() == Some(&Sexp::Atom("and".into())) => {
            items[1..].iter().collect()
        }
        other => vec![other],
    };
    let mut point: Vec<Option<i64>> = vec![None; params.len()];
    for c in conjuncts {
        let Sexp::List(items) = c else { return None };
        let [Sexp::Atom(eq), a, b] = items.as_slice() else {
            return None;
        };
        if eq != "=" {
            return None;
        }
        let (param, value) = match (a, b) {
            (Sexp::Atom(p), v) if params.contains(p) => (p, v),
            (v, Sexp::Atom(p)) if params.contains(p) => (p, v),
            _ => return None,
        };
        let i = params.iter().position(|p| p == param)?;
        if point[i].is_some() {
            return None;
        }
        point[i] = Some(parse_int(value)?);
    }
    point.into_iter().collect()
}

fn parse_table(params: &[String], mut body: &Sexp) -> Option<Interpretation> {
    let mut entries = Vec::new();
    loop {
        match body {
            Sexp::List(items) if items.first() == Some(&Sexp::Atom("ite".into())) => {
                let [_, cond, then, otherwise] = items.as_slice() else {
                    return None;
                };
                let args = parse_point(cond, params)?;
                let value = parse_value(then)?;
                if !entries.iter().any(|e: &TableEntry| e.args == args) {
                    entries.push(TableEntry { args, value });
                }
                body = otherwise;
            }
            other => {
                return Some(Interpretation::Table {
                    entries,
                    default: parse_value(other)?,
                })
            }
        }
    }
}

/// Extracts a countermodel from `(get-model)` output, keeping only the
/// symbols in `wanted`.
fn parse_model(text: &str, wanted: &BTreeMap<String, SymbolRole>) -> Result<Countermodel, String> {
    let top = parse_sexps(text)?;
    let items: Vec<Sexp> = match top.as_slice() {
        [Sexp::List(items)] => items.clone(),
        _ => return Err(format!("expected one model, got `{}`", text.trim())),
    };
    let mut model = Countermodel::default();
    for item in items {
        let Sexp::List(parts) = &item else {
            // older solvers start the list with the word `model`
            continue;
        };
        let [Sexp::Atom(kw), Sexp::Atom(name), Sexp::List(params), _sort, body] = parts.as_slice()
        else {
            continue;
        };
        if kw != "define-fun" {
            continue;
        }
        let name = user_name(name);
        let Some(role) = wanted.get(name) else {
            continue;
        };
        let params: Vec<String> = params
            .iter()
            .map(|p| match p {
                Sexp::List(ps) => match ps.first() {
                    Some(Sexp::Atom(a)) => Ok(a.clone()),
                    _ => Err(format!("bad parameter in `{item}`")),
                },
                _ => Err(format!("bad parameter in `{item}`")),
            })
            .collect::<Result<_, _>>()?;
        let bad = || format!("unexpected value in `{item}`");
        match role {
            SymbolRole::Predicate(0) => match parse_value(body) {
                Some(Value::Bool(b)) => {
                    model.bool_atoms.insert(name.to_string(), b);
                }
                _ => return Err(bad()),
            },
            SymbolRole::Variable => match parse_int(body) {
                Some(n) => {
                    model.int_vars.insert(name.to_string(), n);
                }
                None => {
                    let text = big_int(body).ok_or_else(bad)?;
                    model.large_ints.insert(name.to_string(), text);
                }
            },
            SymbolRole::Predicate(_) | SymbolRole::Function(_) => {
                let interp =
                    parse_table(&params, body).unwrap_or_else(|| Interpretation::Verbatim {
                        text: item.to_string(),
                    });
                model.functions.insert(name.to_string(), interp);
            }
        }
    }
    Ok(model)
}

// ---------------------------------------------------------------------------
// Running the solver

/// How to start an SMT-LIB2 solver that reads a script on stdin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub program: PathBuf,
    pub args: Vec<String>,
}

impl SolverConfig {
    /// Z3 reading from stdin.
    pub fn z3(program: impl Into<PathBuf>) -> SolverConfig {
        SolverConfig {
            program: program.into(),
            args: vec!["-in".into()],
        }
    }

    /// The executable named by `PROOFTREE_SOLVER`, if set.
    pub fn from_env() -> Option<SolverConfig> {
        std::env::var_os(SOLVER_ENV)
            .filter(|v| !v.is_empty())
            .map(SolverConfig::z3)
    }
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig::z3("z3")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "detail")]
pub enum UnknownReason {
    Timeout,
    /// The solver answered `unknown`.
    SolverUnknown,
    SolverError(String),
    Cancelled,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::Timeout => f.write_str("timeout"),
            UnknownReason::SolverUnknown => f.write_str("solver answered unknown"),
            UnknownReason::SolverError(text) => write!(f, "solver error: {text}"),
            UnknownReason::Cancelled => f.write_str("cancelled"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "verdict")]
pub enum SmtVerdict {
    Valid,
    Invalid { model: Countermodel },
    Unknown { reason: UnknownReason },
}

impl SmtVerdict {
    pub fn is_valid(&self) -> bool {
        *self == SmtVerdict::Valid
    }
}

impl fmt::Display for SmtVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmtVerdict::Valid => f.write_str("Valid"),
            SmtVerdict::Invalid { model } => write!(f, "Invalid: {model}"),
            SmtVerdict::Unknown { reason } => write!(f, "Unknown: {reason}"),
        }
    }
}

/// Everything a finished (or killed) solver run produced.
#[derive(Debug, Clone, Default)]
pub struct SolverOutput {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: Option<i32>,
    pub timed_out: bool,
    pub cancelled: bool,
}

fn drain(mut r: impl Read + Send + 'static) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = r.read_to_end(&mut buf);
        String::from_utf8_lossy(&buf).into_owned()
    })
}

/// Feeds `script` to the solver and waits at most `timeout`, killing the
/// process if it runs longer or if `cancel` is raised.
pub fn run_solver(
    config: &SolverConfig,
    script: &str,
    timeout: Duration,
    cancel: Option<&AtomicBool>,
) -> Result<SolverOutput, SmtError> {
    let mut child = Process::new(&config.program)
        .args(&config.args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| match e.kind() {
            io::ErrorKind::NotFound | io::ErrorKind::PermissionDenied => {
                SmtError::SolverNotFound(format!("{} ({e})", config.program.display()))
            }
            _ => SmtError::Io(e.to_string()),
        })?;

    let mut stdin = child.stdin.take().expect("piped");
    let script = script.to_string();
    let writer = thread::spawn(move || {
        let _ = stdin.write_all(script.as_bytes());
    });
    let out = drain(child.stdout.take().expect("piped"));
    let err = drain(child.stderr.take().expect("piped"));

    let start = Instant::now();
    let mut result = SolverOutput::default();
    loop {
        if let Some(status) = child.try_wait().map_err(|e| SmtError::Io(e.to_string()))? {
            result.exit_code = status.code();
            break;
        }
        if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            result.cancelled = true;
        } else if start.elapsed() >= timeout {
            result.timed_out = true;
        }
        if result.cancelled || result.timed_out {
            let _ = child.kill();
            let _ = child.wait();
            break;
        }
        thread::sleep(Duration::from_millis(2));
    }
    let _ = writer.join();
    result.stdout = out.join().unwrap_or_default();
    result.stderr = err.join().unwrap_or_default();
    Ok(result)
}

/// Classifies a run. The verdict is the first line of output; after
/// `unsat` the model request fails and some solvers then exit non-zero.
fn classify(out: &SolverOutput, symbols: &BTreeMap<String, SymbolRole>) -> SmtVerdict {
    let unknown = |reason| SmtVerdict::Unknown { reason };
    if out.cancelled {
        return unknown(UnknownReason::Cancelled);
    }
    if out.timed_out {
        return unknown(UnknownReason::Timeout);
    }
    let mut lines = out.stdout.lines().skip_while(|l| l.trim().is_empty());
    let first = lines.next().map(str::trim);
    let diagnostics = || {
        let text = format!("{}{}", out.stdout, out.stderr);
        let text = text.trim();
        if text.is_empty() {
            format!("solver exited with {:?} and no output", out.exit_code)
        } else {
            text.to_string()
        }
    };
    match first {
        Some("unsat") => SmtVerdict::Valid,
        Some("unknown") => unknown(UnknownReason::SolverUnknown),
        Some("sat") => {
            let rest: Vec<&str> = lines.collect();
            match parse_model(&rest.join("\n"), symbols) {
                Ok(model) => SmtVerdict::Invalid { model },
                Err(e) => unknown(UnknownReason::SolverError(format!(
                    "could not read the model ({e}): {}",
                    diagnostics()
                ))),
            }
        }
        _ => unknown(UnknownReason::SolverError(diagnostics())),
    }
}

/// Asks the solver whether `goal` is valid.
pub fn check_validity(
    goal: &Sequent,
    config: &SolverConfig,
    timeout: Duration,
) -> Result<SmtVerdict, SmtError> {
    check_validity_with(goal, config, timeout, None)
}

/// [`check_validity`] with a cancellation flag.
pub fn check_validity_with(
    goal: &Sequent,
    config: &SolverConfig,
    timeout: Duration,
    cancel: Option<&AtomicBool>,
) -> Result<SmtVerdict, SmtError> {
    let script = encode_sequent(goal)?;
    let symbols = declarations(goal)?;
    let out = run_solver(config, &script, timeout, cancel)?;
    Ok(classify(&out, &symbols))
}

/// Anything that can decide sequent validity.
pub trait ValidityOracle {
    fn check(&self, goal: &Sequent) -> Result<SmtVerdict, SmtError>;
}

/// An external solver with a fixed timeout.
#[derive(Debug, Clone)]
pub struct Solver {
    pub config: SolverConfig,
    pub timeout: Duration,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Solver {
        Solver {
            config,
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Solver {
        self.timeout = timeout;
        self
    }
}

impl ValidityOracle for Solver {
    fn check(&self, goal: &Sequent) -> Result<SmtVerdict, SmtError> {
        check_validity(goal, &self.config, self.timeout)
    }
}

// ---------------------------------------------------------------------------
// The pseudo-axiom

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Z3AxiomError {
    #[error("the Z3 pseudo-axiom only applies to sequent goals")]
    NotLkGoal,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Smt(#[from] SmtError),
}

fn hole_sequent<'a>(tree: &'a ProofTree, path: &NodePath) -> Result<&'a Sequent, Z3AxiomError> {
    let node = tree.node(path)?;
    if !node.is_hole() {
        return Err(TreeError::NotAHole(path.clone()).into());
    }
    match node.goal() {
        Goal::Lk(s) => Ok(s),
        Goal::Hoare(_) => Err(Z3AxiomError::NotLkGoal),
    }
}

/// Checks the hole at `path` and closes it as a pseudo-axiom if the goal is
/// valid. Otherwise the tree comes back unchanged with the verdict.
pub fn apply_z3_axiom(
    tree: &ProofTree,
    path: &NodePath,
    oracle: &dyn ValidityOracle,
) -> Result<(ProofTree, SmtVerdict), Z3AxiomError> {
    let goal = hole_sequent(tree, path)?;
    let verdict = oracle.check(goal)?;
    let tree = apply_verdict(tree, path, goal, &verdict)?;
    Ok((tree, verdict))
}

/// Applies a verdict obtained earlier for `goal`. The hole at `path` must
/// still carry that goal.
pub fn apply_verdict(
    tree: &ProofTree,
    path: &NodePath,
    goal: &Sequent,
    verdict: &SmtVerdict,
) -> Result<ProofTree, Z3AxiomError> {
    let current = hole_sequent(tree, path)?;
    if current != goal {
        return Err(TreeError::GoalMismatch {
            expected: current.to_string(),
            found: goal.to_string(),
        }
        .into());
    }
    if verdict.is_valid() {
        Ok(tree.close_pseudo_axiom(path)?)
    } else {
        Ok(tree.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_sequent;

    fn enc(s: &str) -> String {
        encode_sequent(&parse_sequent(s).unwrap()).unwrap()
    }

    #[test]
    fn reflexivity_script() {
        assert_eq!(
            enc("|- x = x"),
            "(set-option :produce-models true)\n(set-logic ALL)\n\
             (declare-const x Int)\n(assert (not (= x x)))\n(check-sat)\n(get-model)\n"
        );
    }

    #[test]
    fn antecedents_and_succedents() {
        let s = enc("x = 1 |- x + 1 = 2");
        assert!(s.contains("(assert (= x 1))\n(assert (not (= (+ x 1) 2)))\n"));
        let s = enc("|- p \\/ q");
        assert!(s.contains("(declare-const p Bool)\n(declare-const q Bool)\n"));
        assert!(s.contains("(assert (not (or p q)))"));
    }

    #[test]
    fn declarations_are_sorted_and_typed() {
        let s = enc("P(f(x, 2)), r |- forall y. Q(y) /\\ y < -3");
        let decls: Vec<&str> = s.lines().filter(|l| l.starts_with("(declare")).collect();
        assert_eq!(
            decls,
            [
                "(declare-fun P (Int) Bool)",
                "(declare-fun Q (Int) Bool)",
                "(declare-fun f (Int Int) Int)",
                "(declare-const r Bool)",
                "(declare-const x Int)",
            ]
        );
        assert!(s.contains("(forall ((y Int)) (and (Q y) (< y (- 3))))"));
    }

    #[test]
    fn reserved_names_are_renamed() {
        let s = enc("mod(x, 2) = div |- abs");
        assert!(s.contains("(declare-const abs!u Bool)"));
        assert!(s.contains("(declare-fun mod!u (Int Int) Int)"));
        assert!(s.contains("(= (mod!u x 2) div!u)"));
        assert_eq!(user_name("mod!u"), "mod");
        assert_eq!(user_name("|p|"), "p");
        assert_eq!(user_name("x!u"), "x!u");
    }

    #[test]
    fn extreme_literals() {
        let s = enc(&format!("|- x = {}", i64::MIN));
        assert!(s.contains("(- 9223372036854775808)"));
    }

    #[test]
    fn arity_conflict_is_reported() {
        let goal = Sequent::new(
            vec![Formula::pred("P", vec![Term::var("x")])],
            vec![Formula::atom("P")],
        );
        assert!(matches!(
            encode_sequent(&goal),
            Err(SmtError::ArityConflict(_))
        ));
    }

    fn wanted(s: &str) -> BTreeMap<String, SymbolRole> {
        declarations(&parse_sequent(s).unwrap()).unwrap()
    }

    #[test]
    fn model_parsing() {
        let text = "(\n  (define-fun q () Bool\n    false)\n  (define-fun x () Int\n    (- 3))\n  \
                    (define-fun f ((x!0 Int) (x!1 Int)) Int\n    (ite (and (= x!0 2) (= x!1 0)) 5\n    \
                    (ite (and (= x!1 1) (= x!0 (- 1))) 7 3)))\n  (define-fun k!0 () Int 4)\n)";
        let m = parse_model(text, &wanted("q, f(x, 1) = 0 |-")).unwrap();
        assert_eq!(m.bool_atoms, BTreeMap::from([("q".to_string(), false)]));
        assert_eq!(m.int_vars, BTreeMap::from([("x".to_string(), -3)]));
        let f = &m.functions["f"];
        assert_eq!(f.apply(&[2, 0]), Some(Value::Int(5)));
        assert_eq!(f.apply(&[-1, 1]), Some(Value::Int(7)));
        assert_eq!(f.apply(&[9, 9]), Some(Value::Int(3)));
        assert_eq!(
            m.to_string(),
            "q=false x=-3 f={(2, 0) -> 5, (-1, 1) -> 7, else -> 3}"
        );
    }

    #[test]
    fn irreducible_functions_stay_verbatim() {
        let text = "((define-fun f ((x!0 Int)) Int (+ x!0 1)))";
        let m = parse_model(text, &wanted("f(x) = 0 |-")).unwrap();
        assert_eq!(
            m.functions["f"],
            Interpretation::Verbatim {
                text: "(define-fun f ((x!0 Int)) Int (+ x!0 1))".into()
            }
        );
        assert_eq!(m.eval_term(&Term::app("f", vec![Term::int(0)])), None);
    }

    #[test]
    fn legacy_model_prefix() {
        let m = parse_model("(model (define-fun p () Bool true))", &wanted("p |-")).unwrap();
        assert_eq!(m.bool_atoms["p"], true);
    }

    #[test]
    fn integers_beyond_64_bits() {
        let text = "((define-fun y () Int 9223372036854775808) (define-fun z () Int (- 99999999999999999999)))";
        let m = parse_model(text, &wanted("y = z |-")).unwrap();
        assert!(m.int_vars.is_empty());
        assert_eq!(m.large_ints["y"], "9223372036854775808");
        assert_eq!(m.large_ints["z"], "-99999999999999999999");
        assert_eq!(m.eval_term(&Term::var("y")), None);
        assert_eq!(
            m.to_string(),
            "y=9223372036854775808 z=-99999999999999999999"
        );
    }

    fn output(stdout: &str) -> SolverOutput {
        SolverOutput {
            stdout: stdout.into(),
            ..SolverOutput::default()
        }
    }

    #[test]
    fn classification() {
        let syms = wanted("|- p \\/ q");
        let unsat = SolverOutput {
            exit_code: Some(1),
            ..output("unsat\n(error \"line 6 column 10: model is not available\")\n")
        };
        assert_eq!(classify(&unsat, &syms), SmtVerdict::Valid);
        let sat =
            output("sat\n(\n  (define-fun p () Bool false)\n  (define-fun q () Bool false)\n)\n");
        let SmtVerdict::Invalid { model } = classify(&sat, &syms) else {
            panic!()
        };
        assert_eq!(model.to_string(), "p=false q=false");
        assert_eq!(
            classify(&output("unknown\n"), &syms),
            SmtVerdict::Unknown {
                reason: UnknownReason::SolverUnknown
            }
        );
        assert!(matches!(
            classify(&output("(error \"oops\")\n"), &syms),
            SmtVerdict::Unknown {
                reason: UnknownReason::SolverError(_)
            }
        ));
        let timed_out = SolverOutput {
            timed_out: true,
            ..output("")
        };
        assert_eq!(
            classify(&timed_out, &syms),
            SmtVerdict::Unknown {
                reason: UnknownReason::Timeout
            }
        );
    }

    #[test]
    fn missing_solver_is_a_configuration_error() {
        let cfg = SolverConfig::z3("/nonexistent/solver-binary");
        let err =
            check_validity(&parse_sequent("|- p").unwrap(), &cfg, DEFAULT_TIMEOUT).unwrap_err();
        assert!(matches!(err, SmtError::SolverNotFound(_)));
    }

    #[test]
    fn evaluation() {
        let mut m = Countermodel::default();
        m.bool_atoms.insert("p".into(), true);
        m.int_vars.insert("x".into(), 4);
        let s = parse_sequent("p, x = 4 |- x < 2, ~p").unwrap();
        assert_eq!(m.refutes(&s), Some(true));
        let s = parse_sequent("|- x * 2 = 8").unwrap();
        assert_eq!(m.refutes(&s), Some(false));
        assert_eq!(m.eval_formula(&Formula::forall("y", Formula::True)), None);
    }
}

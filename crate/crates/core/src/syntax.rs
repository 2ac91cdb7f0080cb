//! Abstract syntax for terms, formulas, sequents, commands and Hoare triples.
//!
//! Terms are integer-valued. Formulas are first-order over uninterpreted
//! predicates plus the integer relations `=`, `<`, `≤`, `>`, `≥`. A 0-ary
//! predicate application is a propositional atom.
//!
//! All values are immutable trees of owned data, so they are `Send + Sync`
//! and cheap enough to clone for the proof sizes this crate targets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Int(i64),
    Arith(ArithOp, Box<Term>, Box<Term>),
    App(String, Vec<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelOp {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    /// Predicate application; with no arguments this is a propositional atom.
    Pred(String, Vec<Term>),
    Rel(RelOp, Term, Term),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

/// An LK judgment `Γ ⊢ Δ`.
///
/// Both sides keep their display order, but rules treat them as multisets:
/// a principal formula is addressed by index and no exchange rule exists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Sequent {
    pub left: Vec<Formula>,
    pub right: Vec<Formula>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Command {
    Skip,
    Assign(String, Term),
    Seq(Box<Command>, Box<Command>),
    If(Formula, Box<Command>, Box<Command>),
    While(Formula, Box<Command>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HoareTriple {
    pub pre: Formula,
    pub command: Command,
    pub post: Formula,
}

// ---------------------------------------------------------------------------
// Convenience constructors

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn int(value: i64) -> Term {
        Term::Int(value)
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn arith(op: ArithOp, left: Term, right: Term) -> Term {
        Term::Arith(op, Box::new(left), Box::new(right))
    }

    pub fn add(left: Term, right: Term) -> Term {
        Term::arith(ArithOp::Add, left, right)
    }

    pub fn sub(left: Term, right: Term) -> Term {
        Term::arith(ArithOp::Sub, left, right)
    }

    pub fn mul(left: Term, right: Term) -> Term {
        Term::arith(ArithOp::Mul, left, right)
    }
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Pred(name.into(), Vec::new())
    }

    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Pred(name.into(), args)
    }

    pub fn rel(op: RelOp, left: Term, right: Term) -> Formula {
        Formula::Rel(op, left, right)
    }

    pub fn eq(left: Term, right: Term) -> Formula {
        Formula::Rel(RelOp::Eq, left, right)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// True when no quantifier occurs anywhere in the formula.
    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Pred(..) | Formula::Rel(..) | Formula::True | Formula::False => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    /// Number of connective and quantifier nodes.
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::Pred(..) | Formula::Rel(..) | Formula::True | Formula::False => 0,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => {
                1 + a.connective_count()
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.connective_count() + b.connective_count()
            }
        }
    }
}

impl Sequent {
    pub fn new(left: Vec<Formula>, right: Vec<Formula>) -> Sequent {
        Sequent { left, right }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.left.iter().chain(self.right.iter())
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.formulas().all(Formula::is_quantifier_free)
    }

    pub fn connective_count(&self) -> usize {
        self.formulas().map(Formula::connective_count).sum()
    }
}

impl Command {
    pub fn assign(var: impl Into<String>, expr: Term) -> Command {
        Command::Assign(var.into(), expr)
    }

    pub fn seq(first: Command, second: Command) -> Command {
        Command::Seq(Box::new(first), Box::new(second))
    }

    pub fn if_(cond: Formula, then: Command, otherwise: Command) -> Command {
        Command::If(cond, Box::new(then), Box::new(otherwise))
    }

    pub fn while_(cond: Formula, body: Command) -> Command {
        Command::While(cond, Box::new(body))
    }
}

impl HoareTriple {
    pub fn new(pre: Formula, command: Command, post: Formula) -> HoareTriple {
        HoareTriple { pre, command, post }
    }
}

// ---------------------------------------------------------------------------
// Identifiers and fresh names

/// Words the surface syntax reserves; they can never be identifiers.
pub const KEYWORDS: &[&str] = &[
    "forall", "exists", "true", "false", "skip", "if", "then", "else", "end", "while", "do",
];

/// Nonempty, starts with an ASCII letter, continues with letters, digits or `_`,
/// and is not a keyword.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&name)
}

/// `base` if it is not in `avoid`, otherwise `base` followed by the smallest
/// positive integer suffix that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1u64..)
        .map(|n| format!("{base}{n}"))
        .find(|candidate| !avoid.contains(candidate))
        .expect("the suffix space is unbounded")
}

// ---------------------------------------------------------------------------
// Free variables

impl Term {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Int(_) => {}
            Term::Arith(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn contains_var(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Int(_) => false,
            Term::Arith(_, a, b) => a.contains_var(var) || b.contains_var(var),
            Term::App(_, args) => args.iter().any(|a| a.contains_var(var)),
        }
    }

    pub fn substitute(&self, var: &str, replacement: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => replacement.clone(),
            Term::Var(_) | Term::Int(_) => self.clone(),
            Term::Arith(op, a, b) => Term::arith(
                *op,
                a.substitute(var, replacement),
                b.substitute(var, replacement),
            ),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter()
                    .map(|a| a.substitute(var, replacement))
                    .collect(),
            ),
        }
    }
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut add_term = |t: &Term, bound: &Vec<&str>| {
            for v in t.free_vars() {
                if !bound.contains(&v.as_str()) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Pred(_, args) => args.iter().for_each(|t| add_term(t, bound)),
            Formula::Rel(_, a, b) => {
                add_term(a, bound);
                add_term(b, bound);
            }
            Formula::True | Formula::False => {}
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, var: &str) -> bool {
        match self {
            Formula::Pred(_, args) => args.iter().any(|t| t.contains_var(var)),
            Formula::Rel(_, a, b) => a.contains_var(var) || b.contains_var(var),
            Formula::True | Formula::False => false,
            Formula::Not(a) => a.has_free(var),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.has_free(var) || b.has_free(var)
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => x != var && body.has_free(var),
        }
    }

    /// Every identifier that occurs anywhere: free and bound variables,
    /// predicate and function symbols.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        fn term_names(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(v) => {
                    out.insert(v.clone());
                }
                Term::Int(_) => {}
                Term::Arith(_, a, b) => {
                    term_names(a, out);
                    term_names(b, out);
                }
                Term::App(f, args) => {
                    out.insert(f.clone());
                    args.iter().for_each(|a| term_names(a, out));
                }
            }
        }
        match self {
            Formula::Pred(p, args) => {
                out.insert(p.clone());
                args.iter().for_each(|a| term_names(a, out));
            }
            Formula::Rel(_, a, b) => {
                term_names(a, out);
                term_names(b, out);
            }
            Formula::True | Formula::False => {}
            Formula::Not(a) => a.collect_names(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                out.insert(x.clone());
                body.collect_names(out);
            }
        }
    }

    /// Capture-avoiding substitution of `replacement` for the free
    /// occurrences of `var`.
    ///
    /// A binder is renamed (with [`fresh_name`]) only when it would capture a
    /// free variable of `replacement` at a position where `var` occurs free.
    pub fn substitute(&self, var: &str, replacement: &Term) -> Formula {
        match self {
            Formula::Pred(p, args) => Formula::Pred(
                p.clone(),
                args.iter()
                    .map(|t| t.substitute(var, replacement))
                    .collect(),
            ),
            Formula::Rel(op, a, b) => Formula::Rel(
                *op,
                a.substitute(var, replacement),
                b.substitute(var, replacement),
            ),
            Formula::True | Formula::False => self.clone(),
            Formula::Not(a) => Formula::not(a.substitute(var, replacement)),
            Formula::And(a, b) => Formula::and(
                a.substitute(var, replacement),
                b.substitute(var, replacement),
            ),
            Formula::Or(a, b) => Formula::or(
                a.substitute(var, replacement),
                b.substitute(var, replacement),
            ),
            Formula::Implies(a, b) => Formula::implies(
                a.substitute(var, replacement),
                b.substitute(var, replacement),
            ),
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let rebuild = |x: String, body: Formula| match self {
                    Formula::Forall(..) => Formula::Forall(x, Box::new(body)),
                    _ => Formula::Exists(x, Box::new(body)),
                };
                if x == var || !body.has_free(var) {
                    return self.clone();
                }
                if replacement.contains_var(x) {
                    let mut avoid = body.all_names();
                    avoid.extend(replacement.free_vars());
                    avoid.insert(var.to_string());
                    let renamed = fresh_name(x, &avoid);
                    let body = body.substitute(x, &Term::Var(renamed.clone()));
                    rebuild(renamed, body.substitute(var, replacement))
                } else {
                    rebuild(x.clone(), body.substitute(var, replacement))
                }
            }
        }
    }
}

impl Sequent {
    pub fn free_vars(&self) -> BTreeSet<String> {
        self.formulas().flat_map(Formula::free_vars).collect()
    }

    pub fn all_names(&self) -> BTreeSet<String> {
        self.formulas().flat_map(Formula::all_names).collect()
    }
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

/// Structural equality up to renaming of bound variables. No arithmetic or
/// symmetry reasoning is performed.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    alpha_formula(a, b, &mut Vec::new(), &mut Vec::new())
}

/// Position of the innermost binder for `v`, counted from the innermost.
fn binder_index(env: &[&str], v: &str) -> Option<usize> {
    env.iter().rev().position(|b| *b == v)
}

fn alpha_term(a: &Term, b: &Term, left: &[&str], right: &[&str]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => match (binder_index(left, x), binder_index(right, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Term::Int(x), Term::Int(y)) => x == y,
        (Term::Arith(o1, a1, b1), Term::Arith(o2, a2, b2)) => {
            o1 == o2 && alpha_term(a1, a2, left, right) && alpha_term(b1, b2, left, right)
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs
                    .iter()
                    .zip(ys)
                    .all(|(x, y)| alpha_term(x, y, left, right))
        }
        _ => false,
    }
}

fn alpha_formula<'a>(
    a: &'a Formula,
    b: &'a Formula,
    left: &mut Vec<&'a str>,
    right: &mut Vec<&'a str>,
) -> bool {
    match (a, b) {
        (Formula::Pred(p, xs), Formula::Pred(q, ys)) => {
            p == q
                && xs.len() == ys.len()
                && xs
                    .iter()
                    .zip(ys)
                    .all(|(x, y)| alpha_term(x, y, left, right))
        }
        (Formula::Rel(o1, a1, b1), Formula::Rel(o2, a2, b2)) => {
            o1 == o2 && alpha_term(a1, a2, left, right) && alpha_term(b1, b2, left, right)
        }
        (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
        (Formula::Not(x), Formula::Not(y)) => alpha_formula(x, y, left, right),
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
            alpha_formula(a1, a2, left, right) && alpha_formula(b1, b2, left, right)
        }
        (Formula::Forall(x, bx), Formula::Forall(y, by))
        | (Formula::Exists(x, bx), Formula::Exists(y, by)) => {
            left.push(x);
            right.push(y);
            let eq = alpha_formula(bx, by, left, right);
            left.pop();
            right.pop();
            eq
        }
        _ => false,
    }
}

/// Sequents are alpha-equal when their sides are pairwise alpha-equal in order.
pub fn sequent_alpha_eq(a: &Sequent, b: &Sequent) -> bool {
    fn side(xs: &[Formula], ys: &[Formula]) -> bool {
        xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq(x, y))
    }
    side(&a.left, &b.left) && side(&a.right, &b.right)
}

pub fn triple_alpha_eq(a: &HoareTriple, b: &HoareTriple) -> bool {
    alpha_eq(&a.pre, &b.pre)
        && alpha_eq(&a.post, &b.post)
        && command_alpha_eq(&a.command, &b.command)
}

fn command_alpha_eq(a: &Command, b: &Command) -> bool {
    match (a, b) {
        (Command::Skip, Command::Skip) => true,
        (Command::Assign(x, e), Command::Assign(y, f)) => x == y && e == f,
        (Command::Seq(a1, b1), Command::Seq(a2, b2)) => {
            command_alpha_eq(a1, a2) && command_alpha_eq(b1, b2)
        }
        (Command::If(c1, t1, e1), Command::If(c2, t2, e2)) => {
            alpha_eq(c1, c2) && command_alpha_eq(t1, t2) && command_alpha_eq(e1, e2)
        }
        (Command::While(c1, b1), Command::While(c2, b2)) => {
            alpha_eq(c1, c2) && command_alpha_eq(b1, b2)
        }
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Signatures

/// The role an identifier plays inside a goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolRole {
    /// Predicate with the given arity; arity 0 is a propositional atom.
    Predicate(usize),
    Function(usize),
    Variable,
}

impl fmt::Display for SymbolRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolRole::Predicate(0) => write!(f, "a propositional atom"),
            SymbolRole::Predicate(n) => write!(f, "a predicate with {n} argument(s)"),
            SymbolRole::Function(n) => write!(f, "a function with {n} argument(s)"),
            SymbolRole::Variable => write!(f, "a term variable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("{name} used with {first} and {second} arguments")]
    Arity {
        name: String,
        first: usize,
        second: usize,
    },
    #[error("{name} used both as {first} and as {second}")]
    Role {
        name: String,
        first: SymbolRole,
        second: SymbolRole,
    },
}

/// Records how every identifier of a goal is used and rejects inconsistent use.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    roles: BTreeMap<String, SymbolRole>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn roles(&self) -> &BTreeMap<String, SymbolRole> {
        &self.roles
    }

    pub fn role(&self, name: &str) -> Option<SymbolRole> {
        self.roles.get(name).copied()
    }

    pub fn record(&mut self, name: &str, role: SymbolRole) -> Result<(), SignatureError> {
        match self.roles.get(name) {
            None => {
                self.roles.insert(name.to_string(), role);
                Ok(())
            }
            Some(&existing) if existing == role => Ok(()),
            Some(&existing) => Err(match (existing, role) {
                (SymbolRole::Predicate(a), SymbolRole::Predicate(b))
                | (SymbolRole::Function(a), SymbolRole::Function(b)) => SignatureError::Arity {
                    name: name.to_string(),
                    first: a,
                    second: b,
                },
                (first, second) => SignatureError::Role {
                    name: name.to_string(),
                    first,
                    second,
                },
            }),
        }
    }

    pub fn add_term(&mut self, t: &Term) -> Result<(), SignatureError> {
        match t {
            Term::Var(v) => self.record(v, SymbolRole::Variable),
            Term::Int(_) => Ok(()),
            Term::Arith(_, a, b) => {
                self.add_term(a)?;
                self.add_term(b)
            }
            Term::App(f, args) => {
                self.record(f, SymbolRole::Function(args.len()))?;
                args.iter().try_for_each(|a| self.add_term(a))
            }
        }
    }

    pub fn add_formula(&mut self, f: &Formula) -> Result<(), SignatureError> {
        match f {
            Formula::Pred(p, args) => {
                self.record(p, SymbolRole::Predicate(args.len()))?;
                args.iter().try_for_each(|a| self.add_term(a))
            }
            Formula::Rel(_, a, b) => {
                self.add_term(a)?;
                self.add_term(b)
            }
            Formula::True | Formula::False => Ok(()),
            Formula::Not(a) => self.add_formula(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.add_formula(a)?;
                self.add_formula(b)
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                self.record(x, SymbolRole::Variable)?;
                self.add_formula(body)
            }
        }
    }

    pub fn add_sequent(&mut self, s: &Sequent) -> Result<(), SignatureError> {
        s.formulas().try_for_each(|f| self.add_formula(f))
    }

    pub fn add_command(&mut self, c: &Command) -> Result<(), SignatureError> {
        match c {
            Command::Skip => Ok(()),
            Command::Assign(x, e) => {
                self.record(x, SymbolRole::Variable)?;
                self.add_term(e)
            }
            Command::Seq(a, b) => {
                self.add_command(a)?;
                self.add_command(b)
            }
            Command::If(cond, a, b) => {
                self.add_formula(cond)?;
                self.add_command(a)?;
                self.add_command(b)
            }
            Command::While(cond, body) => {
                self.add_formula(cond)?;
                self.add_command(body)
            }
        }
    }

    pub fn add_triple(&mut self, t: &HoareTriple) -> Result<(), SignatureError> {
        self.add_formula(&t.pre)?;
        self.add_command(&t.command)?;
        self.add_formula(&t.post)
    }

    pub fn of_sequent(s: &Sequent) -> Result<Signature, SignatureError> {
        let mut sig = Signature::new();
        sig.add_sequent(s)?;
        Ok(sig)
    }

    pub fn of_triple(t: &HoareTriple) -> Result<Signature, SignatureError> {
        let mut sig = Signature::new();
        sig.add_triple(t)?;
        Ok(sig)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str, args: Vec<Term>) -> Formula {
        Formula::pred(name, args)
    }

    fn v(name: &str) -> Term {
        Term::var(name)
    }

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn free_vars_examples() {
        let f = Formula::forall("x", p("P", vec![v("x"), v("y")]));
        assert_eq!(f.free_vars(), set(&["y"]));
        let g = Formula::eq(Term::add(v("x"), Term::int(1)), Term::int(2));
        assert_eq!(g.free_vars(), set(&["x"]));
        assert!(Formula::atom("p").free_vars().is_empty());
    }

    #[test]
    fn substitute_examples() {
        let f = Formula::eq(v("x"), Term::int(2));
        let t = Term::add(v("x"), Term::int(1));
        assert_eq!(
            f.substitute("x", &t),
            Formula::eq(Term::add(v("x"), Term::int(1)), Term::int(2))
        );

        let f = Formula::exists("y", Formula::eq(v("x"), v("y")));
        assert_eq!(
            f.substitute("x", &v("y")),
            Formula::exists("y1", Formula::eq(v("y"), v("y1")))
        );

        let f = Formula::forall("x", p("P", vec![v("x")]));
        assert_eq!(f.substitute("x", &Term::int(3)), f);
    }

    #[test]
    fn substitute_does_not_rename_without_capture() {
        // y is bound but x does not occur free below it
        let f = Formula::and(
            Formula::eq(v("x"), v("x")),
            Formula::exists("y", p("Q", vec![v("y")])),
        );
        let g = f.substitute("x", &v("y"));
        assert_eq!(
            g,
            Formula::and(
                Formula::eq(v("y"), v("y")),
                Formula::exists("y", p("Q", vec![v("y")]))
            )
        );
    }

    #[test]
    fn fresh_name_examples() {
        assert_eq!(fresh_name("y", &set(&["x"])), "y");
        assert_eq!(fresh_name("y", &set(&["y"])), "y1");
        assert_eq!(fresh_name("y", &set(&["y", "y1"])), "y2");
    }

    #[test]
    fn alpha_eq_examples() {
        let a = Formula::forall("x", p("P", vec![v("x")]));
        let b = Formula::forall("y", p("P", vec![v("y")]));
        assert!(alpha_eq(&a, &b));

        let lhs = Formula::eq(Term::add(v("x"), Term::int(1)), Term::int(2));
        let rhs = Formula::eq(Term::int(2), Term::add(v("x"), Term::int(1)));
        assert!(!alpha_eq(&lhs, &rhs));

        let pq = Formula::and(Formula::atom("p"), Formula::atom("q"));
        assert!(alpha_eq(&pq, &pq.clone()));
    }

    #[test]
    fn alpha_eq_distinguishes_free_from_bound() {
        // ∀x. P(x, y) vs ∀y. P(y, y)
        let a = Formula::forall("x", p("P", vec![v("x"), v("y")]));
        let b = Formula::forall("y", p("P", vec![v("y"), v("y")]));
        assert!(!alpha_eq(&a, &b));
        // shadowing: ∀x. ∀x. P(x) vs ∀y. ∀x. P(x)
        let a = Formula::forall("x", Formula::forall("x", p("P", vec![v("x")])));
        let b = Formula::forall("y", Formula::forall("x", p("P", vec![v("x")])));
        assert!(alpha_eq(&a, &b));
        let c = Formula::forall("y", Formula::forall("x", p("P", vec![v("y")])));
        assert!(!alpha_eq(&a, &c));
    }

    #[test]
    fn signature_rejects_arity_and_role_conflicts() {
        let s = Sequent::new(
            vec![p("P", vec![v("x")])],
            vec![p("P", vec![v("x"), v("y")])],
        );
        let err = Signature::of_sequent(&s).unwrap_err();
        assert_eq!(err.to_string(), "P used with 1 and 2 arguments");

        let s = Sequent::new(
            vec![Formula::atom("x")],
            vec![Formula::eq(v("x"), Term::int(1))],
        );
        assert!(matches!(
            Signature::of_sequent(&s),
            Err(SignatureError::Role { .. })
        ));

        let s = Sequent::new(vec![p("f", vec![Term::app("f", vec![v("x")])])], vec![]);
        assert!(matches!(
            Signature::of_sequent(&s),
            Err(SignatureError::Role { .. })
        ));
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("x"));
        assert!(is_identifier("foo_1"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("1x"));
        assert!(!is_identifier("_x"));
        assert!(!is_identifier("forall"));
        assert!(!is_identifier("x-y"));
    }
}

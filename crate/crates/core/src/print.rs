//! Pretty-printing with minimal parentheses.
//!
//! One printer serves both the Unicode preview text and the math-mode LaTeX
//! used by the exporter; only the [`Notation`] table differs. Output always
//! reparses to the same tree under the grammar in `docs/grammar.md`.

use std::fmt;

use crate::syntax::{ArithOp, Command, Formula, HoareTriple, RelOp, Sequent, Term};

/// Spelling of every operator for one output dialect.
#[derive(Debug, Clone, Copy)]
pub struct Notation {
    pub and: &'static str,
    pub or: &'static str,
    pub implies: &'static str,
    pub not: &'static str,
    pub forall: &'static str,
    pub exists: &'static str,
    pub binder_dot: &'static str,
    pub truth: &'static str,
    pub falsity: &'static str,
    pub turnstile: &'static str,
    pub eq: &'static str,
    pub lt: &'static str,
    pub le: &'static str,
    pub gt: &'static str,
    pub ge: &'static str,
    pub add: &'static str,
    pub sub: &'static str,
    pub mul: &'static str,
    pub assign: &'static str,
    pub seq: &'static str,
    pub open_brace: &'static str,
    pub close_brace: &'static str,
    /// Between the precondition and the command.
    pub triple_gap: &'static str,
    /// Between the command and the postcondition.
    pub triple_gap_after: &'static str,
    /// Space around command keywords.
    pub word_gap: &'static str,
    pub keyword: fn(&str) -> String,
    pub ident: fn(&str) -> String,
}

fn plain(s: &str) -> String {
    s.to_string()
}

fn latex_keyword(s: &str) -> String {
    format!("\\mathbf{{{s}}}")
}

/// Single letters stay bare; longer names go in `\mathit` with `_` escaped.
fn latex_ident(s: &str) -> String {
    if s.chars().count() == 1 {
        s.to_string()
    } else {
        format!("\\mathit{{{}}}", s.replace('_', "\\_"))
    }
}

pub const UNICODE: Notation = Notation {
    and: " ∧ ",
    or: " ∨ ",
    implies: " ⇒ ",
    not: "¬",
    forall: "∀",
    exists: "∃",
    binder_dot: ". ",
    truth: "⊤",
    falsity: "⊥",
    turnstile: "⊢",
    eq: " = ",
    lt: " < ",
    le: " ≤ ",
    gt: " > ",
    ge: " ≥ ",
    add: " + ",
    sub: " − ",
    mul: " × ",
    assign: " := ",
    seq: "; ",
    open_brace: "{",
    close_brace: "}",
    triple_gap: " ",
    triple_gap_after: " ",
    word_gap: " ",
    keyword: plain,
    ident: plain,
};

pub const LATEX: Notation = Notation {
    and: " \\land ",
    or: " \\lor ",
    implies: " \\Rightarrow ",
    not: "\\lnot ",
    forall: "\\forall ",
    exists: "\\exists ",
    binder_dot: ".\\, ",
    truth: "\\top",
    falsity: "\\bot",
    turnstile: "\\vdash",
    eq: " = ",
    lt: " < ",
    le: " \\leq ",
    gt: " > ",
    ge: " \\geq ",
    add: " + ",
    sub: " - ",
    mul: " \\times ",
    assign: " \\mathrel{:=} ",
    seq: ";\\; ",
    open_brace: "\\{",
    close_brace: "\\}",
    triple_gap: "\\; ",
    triple_gap_after: " \\;",
    word_gap: "\\ ",
    keyword: latex_keyword,
    ident: latex_ident,
};

// Formula precedence levels, loosest first.
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NOT: u8 = 5;

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;

pub struct Printer {
    pub notation: Notation,
}

impl Printer {
    pub fn new(notation: Notation) -> Printer {
        Printer { notation }
    }

    pub fn term(&self, t: &Term) -> String {
        let mut out = String::new();
        self.write_term(t, 0, &mut out);
        out
    }

    fn write_term(&self, t: &Term, ctx: u8, out: &mut String) {
        let n = &self.notation;
        match t {
            Term::Var(v) => out.push_str(&(n.ident)(v)),
            Term::Int(i) => out.push_str(&i.to_string()),
            Term::App(f, args) => {
                out.push_str(&(n.ident)(f));
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.write_term(a, 0, out);
                }
                out.push(')');
            }
            Term::Arith(op, a, b) => {
                let (prec, sym) = match op {
                    ArithOp::Add => (PREC_ADD, n.add),
                    ArithOp::Sub => (PREC_ADD, n.sub),
                    ArithOp::Mul => (PREC_MUL, n.mul),
                };
                let paren = ctx > prec;
                if paren {
                    out.push('(');
                }
                self.write_term(a, prec, out);
                out.push_str(sym);
                self.write_term(b, prec + 1, out);
                if paren {
                    out.push(')');
                }
            }
        }
    }

    pub fn formula(&self, f: &Formula) -> String {
        let mut out = String::new();
        self.write_formula(f, 0, true, &mut out);
        out
    }

    /// `tail` is true when nothing follows this subformula before the end of
    /// the enclosing group, so an unparenthesised quantifier cannot swallow
    /// anything it should not.
    fn write_formula(&self, f: &Formula, ctx: u8, tail: bool, out: &mut String) {
        let n = &self.notation;
        match f {
            Formula::Pred(p, args) => {
                out.push_str(&(n.ident)(p));
                if !args.is_empty() {
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        self.write_term(a, 0, out);
                    }
                    out.push(')');
                }
            }
            Formula::Rel(op, a, b) => {
                let sym = match op {
                    RelOp::Eq => n.eq,
                    RelOp::Lt => n.lt,
                    RelOp::Le => n.le,
                    RelOp::Gt => n.gt,
                    RelOp::Ge => n.ge,
                };
                // Under a negation the relation is bracketed for legibility.
                let paren = ctx >= PREC_NOT;
                if paren {
                    out.push('(');
                }
                self.write_term(a, 0, out);
                out.push_str(sym);
                self.write_term(b, 0, out);
                if paren {
                    out.push(')');
                }
            }
            Formula::True => out.push_str(n.truth),
            Formula::False => out.push_str(n.falsity),
            Formula::Not(a) => {
                out.push_str(n.not);
                self.write_formula(a, PREC_NOT, tail, out);
            }
            Formula::And(a, b) => self.write_binary(a, b, PREC_AND, n.and, false, ctx, tail, out),
            Formula::Or(a, b) => self.write_binary(a, b, PREC_OR, n.or, false, ctx, tail, out),
            Formula::Implies(a, b) => {
                self.write_binary(a, b, PREC_IMPLIES, n.implies, true, ctx, tail, out)
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let paren = !tail;
                if paren {
                    out.push('(');
                }
                out.push_str(if matches!(f, Formula::Forall(..)) {
                    n.forall
                } else {
                    n.exists
                });
                out.push_str(&(n.ident)(x));
                out.push_str(n.binder_dot);
                self.write_formula(body, 0, true, out);
                if paren {
                    out.push(')');
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn write_binary(
        &self,
        a: &Formula,
        b: &Formula,
        prec: u8,
        sym: &str,
        right_assoc: bool,
        ctx: u8,
        tail: bool,
        out: &mut String,
    ) {
        let paren = ctx > prec;
        let inner_tail = paren || tail;
        if paren {
            out.push('(');
        }
        let (left_prec, right_prec) = if right_assoc {
            (prec + 1, prec)
        } else {
            (prec, prec + 1)
        };
        // A conjunction or disjunction directly under an implication is
        // bracketed for legibility.
        let operand = |f: &Formula, p: u8| match f {
            Formula::And(..) | Formula::Or(..) if prec == PREC_IMPLIES => PREC_NOT,
            _ => p,
        };
        self.write_formula(a, operand(a, left_prec), false, out);
        out.push_str(sym);
        self.write_formula(b, operand(b, right_prec), inner_tail, out);
        if paren {
            out.push(')');
        }
    }

    pub fn sequent(&self, s: &Sequent) -> String {
        let side = |fs: &[Formula]| {
            fs.iter()
                .map(|f| self.formula(f))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut out = String::new();
        if !s.left.is_empty() {
            out.push_str(&side(&s.left));
            out.push(' ');
        }
        out.push_str(self.notation.turnstile);
        if !s.right.is_empty() {
            out.push(' ');
            out.push_str(&side(&s.right));
        }
        out
    }

    pub fn command(&self, c: &Command) -> String {
        let mut out = String::new();
        self.write_command(c, &mut out);
        out
    }

    fn write_command(&self, c: &Command, out: &mut String) {
        let n = &self.notation;
        let kw = n.keyword;
        match c {
            Command::Skip => out.push_str(&kw("skip")),
            Command::Assign(x, e) => {
                out.push_str(&(n.ident)(x));
                out.push_str(n.assign);
                self.write_term(e, 0, out);
            }
            Command::Seq(a, b) => {
                if matches!(**a, Command::Seq(..)) {
                    out.push('(');
                    self.write_command(a, out);
                    out.push(')');
                } else {
                    self.write_command(a, out);
                }
                out.push_str(n.seq);
                self.write_command(b, out);
            }
            Command::If(cond, then, otherwise) => {
                let sp = n.word_gap;
                out.push_str(&kw("if"));
                out.push_str(sp);
                self.write_formula(cond, 0, true, out);
                out.push_str(sp);
                out.push_str(&kw("then"));
                out.push_str(sp);
                self.write_command(then, out);
                out.push_str(sp);
                out.push_str(&kw("else"));
                out.push_str(sp);
                self.write_command(otherwise, out);
                out.push_str(sp);
                out.push_str(&kw("end"));
            }
            Command::While(cond, body) => {
                let sp = n.word_gap;
                out.push_str(&kw("while"));
                out.push_str(sp);
                self.write_formula(cond, 0, true, out);
                out.push_str(sp);
                out.push_str(&kw("do"));
                out.push_str(sp);
                self.write_command(body, out);
                out.push_str(sp);
                out.push_str(&kw("end"));
            }
        }
    }

    pub fn triple(&self, t: &HoareTriple) -> String {
        let n = &self.notation;
        format!(
            "{open}{pre}{close}{gap}{cmd}{after}{open}{post}{close}",
            open = n.open_brace,
            close = n.close_brace,
            gap = n.triple_gap,
            after = n.triple_gap_after,
            pre = self.formula(&t.pre),
            cmd = self.command(&t.command),
            post = self.formula(&t.post),
        )
    }
}

const UNICODE_PRINTER: Printer = Printer { notation: UNICODE };

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&UNICODE_PRINTER.term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&UNICODE_PRINTER.formula(self))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&UNICODE_PRINTER.sequent(self))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&UNICODE_PRINTER.command(self))
    }
}

impl fmt::Display for HoareTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&UNICODE_PRINTER.triple(self))
    }
}

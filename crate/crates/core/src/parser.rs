//! Text to syntax trees.
//!
//! The grammar is documented in `docs/grammar.md`. Both Unicode and ASCII
//! spellings are accepted for every operator; errors carry a 1-based line
//! and column. Parsing stops at the first error.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{
    ArithOp, Command, Formula, HoareTriple, RelOp, Sequent, Signature, SymbolRole, Term,
};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i128),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Semi,
    Assign,
    Turnstile,
    And,
    Or,
    Implies,
    Not,
    Forall,
    Exists,
    True,
    False,
    Rel(RelOp),
    Plus,
    Minus,
    Times,
    Skip,
    If,
    Then,
    Else,
    End,
    While,
    Do,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier `{name}`"),
            Tok::Int(i) => return write!(f, "number `{i}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Semi => "`;`",
            Tok::Assign => "`:=`",
            Tok::Turnstile => "`⊢`",
            Tok::And => "`∧`",
            Tok::Or => "`∨`",
            Tok::Implies => "`⇒`",
            Tok::Not => "`¬`",
            Tok::Forall => "`∀`",
            Tok::Exists => "`∃`",
            Tok::True => "`⊤`",
            Tok::False => "`⊥`",
            Tok::Rel(RelOp::Eq) => "`=`",
            Tok::Rel(RelOp::Lt) => "`<`",
            Tok::Rel(RelOp::Le) => "`≤`",
            Tok::Rel(RelOp::Gt) => "`>`",
            Tok::Rel(RelOp::Ge) => "`≥`",
            Tok::Plus => "`+`",
            Tok::Minus => "`−`",
            Tok::Times => "`×`",
            Tok::Skip => "`skip`",
            Tok::If => "`if`",
            Tok::Then => "`then`",
            Tok::Else => "`else`",
            Tok::End => "`end`",
            Tok::While => "`while`",
            Tok::Do => "`do`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "forall" => Tok::Forall,
        "exists" => Tok::Exists,
        "true" => Tok::True,
        "false" => Tok::False,
        "skip" => Tok::Skip,
        "if" => Tok::If,
        "then" => Tok::Then,
        "else" => Tok::Else,
        "end" => Tok::End,
        "while" => Tok::While,
        "do" => Tok::Do,
        _ => return None,
    })
}

fn lex(input: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        let next = chars.get(i + 1).copied();
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            column += i - start;
            out.push((keyword(&word).unwrap_or(Tok::Ident(word)), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            column += i - start;
            let value = digits
                .parse::<i128>()
                .ok()
                .filter(|v| *v <= i64::MAX as i128 + 1)
                .ok_or_else(|| ParseError {
                    message: format!("integer literal {digits} is out of range"),
                    line: pos.line,
                    column: pos.column,
                })?;
            out.push((Tok::Int(value), pos));
            continue;
        }
        let (tok, width) = match (c, next) {
            ('|', Some('-')) => (Tok::Turnstile, 2),
            ('|', Some('|')) => (Tok::Or, 2),
            ('/', Some('\\')) => (Tok::And, 2),
            ('\\', Some('/')) => (Tok::Or, 2),
            ('&', Some('&')) => (Tok::And, 2),
            ('=', Some('>')) => (Tok::Implies, 2),
            ('-', Some('>')) => (Tok::Implies, 2),
            ('<', Some('=')) => (Tok::Rel(RelOp::Le), 2),
            ('>', Some('=')) => (Tok::Rel(RelOp::Ge), 2),
            (':', Some('=')) => (Tok::Assign, 2),
            ('⊢', _) => (Tok::Turnstile, 1),
            ('∧', _) => (Tok::And, 1),
            ('∨', _) => (Tok::Or, 1),
            ('⇒', _) => (Tok::Implies, 1),
            ('¬' | '~' | '!', _) => (Tok::Not, 1),
            ('∀', _) => (Tok::Forall, 1),
            ('∃', _) => (Tok::Exists, 1),
            ('⊤', _) => (Tok::True, 1),
            ('⊥', _) => (Tok::False, 1),
            ('=', _) => (Tok::Rel(RelOp::Eq), 1),
            ('<', _) => (Tok::Rel(RelOp::Lt), 1),
            ('≤', _) => (Tok::Rel(RelOp::Le), 1),
            ('>', _) => (Tok::Rel(RelOp::Gt), 1),
            ('≥', _) => (Tok::Rel(RelOp::Ge), 1),
            ('+', _) => (Tok::Plus, 1),
            ('-' | '−', _) => (Tok::Minus, 1),
            ('*' | '×', _) => (Tok::Times, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (',', _) => (Tok::Comma, 1),
            ('.', _) => (Tok::Dot, 1),
            (';', _) => (Tok::Semi, 1),
            _ => {
                return Err(ParseError {
                    message: format!("unexpected character `{c}`"),
                    line,
                    column,
                })
            }
        };
        out.push((tok, pos));
        i += width;
        column += width;
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

/// One occurrence of an identifier, with the role its position implies.
#[derive(Debug, Clone)]
struct Use {
    name: String,
    role: SymbolRole,
    pos: Pos,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    idx: usize,
    uses: Vec<Use>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(input: &str) -> PResult<Parser> {
        Ok(Parser {
            toks: lex(input)?,
            idx: 0,
            uses: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.idx].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.idx].0.clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error_here(&self, expected: &str) -> ParseError {
        let pos = self.pos();
        ParseError {
            message: format!("expected {expected}, found {}", self.peek()),
            line: pos.line,
            column: pos.column,
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error_here(expected))
        }
    }

    fn expect_ident(&mut self, expected: &str) -> PResult<(String, Pos)> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok((name, pos))
            }
            _ => Err(self.error_here(expected)),
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error_here("end of input"))
        }
    }

    fn record(&mut self, name: String, role: SymbolRole, pos: Pos) {
        self.uses.push(Use { name, role, pos });
    }

    /// Replays identifier uses in source order and reports the first
    /// inconsistent one.
    fn check_signature(&self) -> PResult<()> {
        let mut sig = Signature::new();
        for u in &self.uses {
            sig.record(&u.name, u.role).map_err(|e| ParseError {
                message: e.to_string(),
                line: u.pos.line,
                column: u.pos.column,
            })?;
        }
        Ok(())
    }

    // -- terms ------------------------------------------------------------

    fn term(&mut self) -> PResult<Term> {
        let mut left = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.product()?;
            left = Term::arith(op, left, right);
        }
    }

    fn product(&mut self) -> PResult<Term> {
        let mut left = self.operand()?;
        while *self.peek() == Tok::Times {
            self.bump();
            let right = self.operand()?;
            left = Term::mul(left, right);
        }
        Ok(left)
    }

    fn int_literal(&mut self, negative: bool) -> PResult<Term> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                let v = if negative { -v } else { v };
                i64::try_from(v).map(Term::Int).map_err(|_| ParseError {
                    message: format!("integer literal {v} is out of range"),
                    line: pos.line,
                    column: pos.column,
                })
            }
            _ => Err(self.error_here("an integer literal")),
        }
    }

    fn operand(&mut self) -> PResult<Term> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(_) => self.int_literal(false),
            Tok::Minus => {
                self.bump();
                self.int_literal(true)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    let mark = self.uses.len();
                    self.record(name.clone(), SymbolRole::Function(0), pos);
                    let args = self.arguments()?;
                    self.uses[mark].role = SymbolRole::Function(args.len());
                    Ok(Term::App(name, args))
                } else {
                    self.record(name.clone(), SymbolRole::Variable, pos);
                    Ok(Term::Var(name))
                }
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.error_here("a term")),
        }
    }

    fn arguments(&mut self) -> PResult<Vec<Term>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        Ok(args)
    }

    // -- formulas ---------------------------------------------------------

    fn formula(&mut self) -> PResult<Formula> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let right = self.formula()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut left = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut left = self.unary()?;
        while self.eat(&Tok::And) {
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.bump() == Tok::Forall;
                let (var, pos) = self.expect_ident("a bound variable")?;
                self.record(var.clone(), SymbolRole::Variable, pos);
                self.expect(Tok::Dot, "`.` after the bound variable")?;
                let body = self.formula()?;
                Ok(if universal {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                // `(` opens either a term on the left of a relation or a
                // parenthesised formula; try the relation first.
                let (idx, mark) = (self.idx, self.uses.len());
                let as_relation = self.term().and_then(|t| self.relation_tail(t));
                match as_relation {
                    Ok(f) => Ok(f),
                    Err(rel_err) => {
                        self.idx = idx;
                        self.uses.truncate(mark);
                        let as_group = (|| {
                            self.bump();
                            let f = self.formula()?;
                            self.expect(Tok::RParen, "`)`")?;
                            Ok(f)
                        })();
                        match as_group {
                            Ok(f) => Ok(f),
                            Err(group_err) => {
                                let key = |e: &ParseError| (e.line, e.column);
                                Err(if key(&rel_err) > key(&group_err) {
                                    rel_err
                                } else {
                                    group_err
                                })
                            }
                        }
                    }
                }
            }
            Tok::Ident(_) | Tok::Int(_) | Tok::Minus => self.atom_or_relation(),
            _ => Err(self.error_here("a formula")),
        }
    }

    fn relation_tail(&mut self, left: Term) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::Rel(op) => {
                self.bump();
                let right = self.term()?;
                Ok(Formula::rel(op, left, right))
            }
            _ => Err(self.error_here("a relational operator")),
        }
    }

    fn atom_or_relation(&mut self) -> PResult<Formula> {
        let mark = self.uses.len();
        let t = self.term()?;
        if matches!(self.peek(), Tok::Rel(_)) {
            return self.relation_tail(t);
        }
        // A bare identifier or application in formula position is a
        // predicate; its head is the first use recorded for this term.
        match t {
            Term::Var(name) => {
                self.uses[mark].role = SymbolRole::Predicate(0);
                Ok(Formula::Pred(name, Vec::new()))
            }
            Term::App(name, args) => {
                self.uses[mark].role = SymbolRole::Predicate(args.len());
                Ok(Formula::Pred(name, args))
            }
            _ => Err(self.error_here("a relational operator")),
        }
    }

    fn formula_list(&mut self) -> PResult<Vec<Formula>> {
        let mut out = Vec::new();
        if matches!(self.peek(), Tok::Turnstile | Tok::Eof) {
            return Ok(out);
        }
        out.push(self.formula()?);
        while self.eat(&Tok::Comma) {
            out.push(self.formula()?);
        }
        Ok(out)
    }

    fn sequent(&mut self) -> PResult<Sequent> {
        let left = self.formula_list()?;
        self.expect(Tok::Turnstile, "`,` or `⊢`")?;
        let right = self.formula_list()?;
        Ok(Sequent::new(left, right))
    }

    // -- commands ---------------------------------------------------------

    fn command(&mut self) -> PResult<Command> {
        let first = self.simple_command()?;
        if self.eat(&Tok::Semi) {
            Ok(Command::seq(first, self.command()?))
        } else {
            Ok(first)
        }
    }

    fn simple_command(&mut self) -> PResult<Command> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Skip => {
                self.bump();
                Ok(Command::Skip)
            }
            Tok::Ident(name) => {
                self.bump();
                self.record(name.clone(), SymbolRole::Variable, pos);
                self.expect(Tok::Assign, "`:=`")?;
                Ok(Command::Assign(name, self.term()?))
            }
            Tok::If => {
                self.bump();
                let cond = self.formula()?;
                self.expect(Tok::Then, "`then`")?;
                let then = self.command()?;
                self.expect(Tok::Else, "`else`")?;
                let otherwise = self.command()?;
                self.expect(Tok::End, "`end`")?;
                Ok(Command::if_(cond, then, otherwise))
            }
            Tok::While => {
                self.bump();
                let cond = self.formula()?;
                self.expect(Tok::Do, "`do`")?;
                let body = self.command()?;
                self.expect(Tok::End, "`end`")?;
                Ok(Command::while_(cond, body))
            }
            Tok::LParen => {
                self.bump();
                let c = self.command()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(c)
            }
            _ => Err(self.error_here("a command")),
        }
    }

    fn triple(&mut self) -> PResult<HoareTriple> {
        self.expect(Tok::LBrace, "`{` opening the precondition")?;
        let pre = self.formula()?;
        self.expect(Tok::RBrace, "`}`")?;
        let command = self.command()?;
        self.expect(Tok::LBrace, "`{` opening the postcondition")?;
        let post = self.formula()?;
        self.expect(Tok::RBrace, "`}`")?;
        Ok(HoareTriple::new(pre, command, post))
    }

    fn finish<T>(&mut self, parse: impl FnOnce(&mut Parser) -> PResult<T>) -> PResult<T> {
        let value = parse(self)?;
        self.expect_eof()?;
        self.check_signature()?;
        Ok(value)
    }
}

fn run<T>(input: &str, parse: impl FnOnce(&mut Parser) -> PResult<T>) -> PResult<T> {
    Parser::new(input)?.finish(parse)
}

pub fn parse_sequent(input: &str) -> Result<Sequent, ParseError> {
    run(input, Parser::sequent)
}

pub fn parse_triple(input: &str) -> Result<HoareTriple, ParseError> {
    run(input, Parser::triple)
}

pub fn parse_formula(input: &str) -> Result<Formula, ParseError> {
    run(input, Parser::formula)
}

pub fn parse_term(input: &str) -> Result<Term, ParseError> {
    run(input, Parser::term)
}

pub fn parse_command(input: &str) -> Result<Command, ParseError> {
    run(input, Parser::command)
}

/// What a preview request should parse the input as.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntaxKind {
    Sequent,
    Triple,
    Formula,
    Term,
}

impl std::str::FromStr for SyntaxKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sequent" => Ok(SyntaxKind::Sequent),
            "triple" => Ok(SyntaxKind::Triple),
            "formula" => Ok(SyntaxKind::Formula),
            "term" => Ok(SyntaxKind::Term),
            other => Err(format!(
                "unknown syntax kind `{other}` (expected sequent, triple, formula or term)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Sequent(Sequent),
    Triple(HoareTriple),
    Formula(Formula),
    Term(Term),
}

impl Parsed {
    /// Canonical Unicode rendering; reparses to the same tree.
    pub fn canonical_text(&self) -> String {
        match self {
            Parsed::Sequent(s) => s.to_string(),
            Parsed::Triple(t) => t.to_string(),
            Parsed::Formula(f) => f.to_string(),
            Parsed::Term(t) => t.to_string(),
        }
    }
}

/// Parse `input` as `kind`; cheap enough to call on every keystroke.
pub fn parse_preview(input: &str, kind: SyntaxKind) -> Result<Parsed, ParseError> {
    match kind {
        SyntaxKind::Sequent => parse_sequent(input).map(Parsed::Sequent),
        SyntaxKind::Triple => parse_triple(input).map(Parsed::Triple),
        SyntaxKind::Formula => parse_formula(input).map(Parsed::Formula),
        SyntaxKind::Term => parse_term(input).map(Parsed::Term),
    }
}

//! Kernel of an interactive proof tree builder for LK sequent calculus and
//! Hoare logic.
//!
//! Proofs grow upward from a goal: every unproved leaf is a hole, and a rule
//! applied at a hole is checked when it is constructed. Nothing outside this
//! crate can build an ill-formed inference.
//!
//! The guide in `book/` walks through each part with runnable snippets.

pub mod auto;
pub mod hoare;
pub mod latex;
pub mod lk;
pub mod parser;
pub mod persist;
pub mod print;
pub mod rule;
pub mod smt;
pub mod syntax;
pub mod tree;

pub use parser::{
    parse_command, parse_formula, parse_preview, parse_sequent, parse_term, parse_triple,
    ParseError, Parsed, SyntaxKind,
};
pub use rule::{Args, Goal, Rule, RuleError};
pub use syntax::{alpha_eq, fresh_name, Command, Formula, HoareTriple, Sequent, Term};
pub use tree::{NodePath, ProofTree, TreeError};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/syntax.md")]
    mod syntax {}
    #[doc = include_str!("../../../book/src/lk.md")]
    mod lk {}
    #[doc = include_str!("../../../book/src/hoare.md")]
    mod hoare {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/automation.md")]
    mod automation {}
    #[doc = include_str!("../../../book/src/smt.md")]
    mod smt {}
    #[doc = include_str!("../../../book/src/files.md")]
    mod files {}
}

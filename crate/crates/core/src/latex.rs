//! LaTeX export in `bussproofs` syntax.
//!
//! The whole tree is rendered, hidden subtrees included. Holes become a
//! vertical-dots axiom above their goal. Pseudo-axiom closures are labelled
//! `Z3` and preceded by a comment line saying they are not a calculus rule.

use crate::print::{Printer, LATEX};
use crate::rule::Goal;
use crate::tree::{ProofTree, Status};

const PRINTER: Printer = Printer { notation: LATEX };

/// Comment emitted above every pseudo-axiom closure.
pub const PSEUDO_AXIOM_COMMENT: &str =
    "% pseudo-axiom: closed by the SMT solver, not by a calculus rule";

pub fn goal_latex(goal: &Goal) -> String {
    match goal {
        Goal::Lk(s) => PRINTER.sequent(s),
        Goal::Hoare(t) => PRINTER.triple(t),
    }
}

fn inference(premises: usize) -> &'static str {
    match premises {
        1 => "\\UnaryInfC",
        2 => "\\BinaryInfC",
        3 => "\\TrinaryInfC",
        4 => "\\QuaternaryInfC",
        _ => "\\QuinaryInfC",
    }
}

fn emit(node: &ProofTree, out: &mut Vec<String>) {
    let goal = goal_latex(node.goal());
    match node.status() {
        Status::Hole => {
            out.push("\\AxiomC{$\\;\\vdots\\;$}".into());
            out.push(format!("\\UnaryInfC{{${goal}$}}"));
        }
        Status::Closed { rule, .. } => {
            let label = if rule.is_pseudo_axiom() {
                out.push(PSEUDO_AXIOM_COMMENT.into());
                "Z3"
            } else {
                rule.name()
            };
            out.push("\\AxiomC{}".into());
            out.push(format!("\\RightLabel{{\\textsc{{{label}}}}}"));
            out.push(format!("\\UnaryInfC{{${goal}$}}"));
        }
        Status::Derived { rule, children, .. } => {
            for c in children {
                emit(c, out);
            }
            out.push(format!("\\RightLabel{{\\textsc{{{}}}}}", rule.name()));
            out.push(format!("{}{{${goal}$}}", inference(children.len())));
        }
    }
}

/// One `prooftree` environment for the whole tree.
pub fn to_latex(tree: &ProofTree) -> String {
    let mut lines = vec!["\\begin{prooftree}".to_string()];
    emit(tree, &mut lines);
    lines.push("\\end{prooftree}".into());
    lines.join("\n") + "\n"
}

/// [`to_latex`] wrapped in a minimal compilable document.
pub fn to_latex_document(tree: &ProofTree) -> String {
    format!(
        "\\documentclass{{article}}\n\\usepackage{{amsmath,amssymb,bussproofs}}\n\\begin{{document}}\n{}\\end{{document}}\n",
        to_latex(tree)
    )
}

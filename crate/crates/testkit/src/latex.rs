//! Fixed trees for LaTeX golden files and a structural check of the output.

use prooftree::auto::{auto_prove, Limits};
use prooftree::hoare::{HoareArgs, HoareRule};
use prooftree::lk::{LkRule, Position, RuleArgs};
use prooftree::smt::apply_z3_axiom;
use prooftree::{
    parse_formula, parse_sequent, parse_term, parse_triple, Args, NodePath, ProofTree, Rule,
};

use crate::oracle::BoundedArithmetic;

fn at(p: &[usize]) -> NodePath {
    NodePath::from(p.to_vec())
}

fn lk(tree: ProofTree, path: &[usize], rule: LkRule, args: RuleArgs) -> ProofTree {
    tree.apply_at(&at(path), Rule::Lk(rule), Args::Lk(args))
        .unwrap()
}

fn hoare(tree: ProofTree, path: &[usize], rule: HoareRule, args: HoareArgs) -> ProofTree {
    tree.apply_at(&at(path), Rule::Hoare(rule), Args::Hoare(args))
        .unwrap()
}

fn f(text: &str) -> prooftree::Formula {
    parse_formula(text).unwrap()
}

pub fn walkthrough() -> ProofTree {
    auto_prove(
        &parse_sequent("|- p => q => (p /\\ q)").unwrap(),
        Limits::default(),
    )
    .tree
}

pub fn partial() -> ProofTree {
    let t = ProofTree::from_sequent(parse_sequent("p /\\ q |- q /\\ p").unwrap());
    let t = lk(t, &[], LkRule::AndL, RuleArgs::at(Position::left(0)));
    lk(t, &[0], LkRule::AndR, RuleArgs::at(Position::right(0)))
}

pub fn quantifiers() -> ProofTree {
    let t = ProofTree::from_sequent(parse_sequent("forall x. P(x) |- exists y. P(y)").unwrap());
    let z = parse_term("z").unwrap();
    let t = lk(
        t,
        &[],
        LkRule::ForallL,
        RuleArgs::at(Position::left(0)).witness(z.clone()),
    );
    let t = lk(
        t,
        &[0],
        LkRule::ExistsR,
        RuleArgs::at(Position::right(0)).witness(z),
    );
    lk(t, &[0, 0], LkRule::Id, RuleArgs::default())
}

pub fn consequence() -> ProofTree {
    let t = ProofTree::from_triple(parse_triple("{x = 1} x := x + 1 {x = 2}").unwrap());
    let t = hoare(
        t,
        &[],
        HoareRule::HConseq,
        HoareArgs::conseq(f("x + 1 = 2"), f("x = 2")),
    );
    let t = hoare(t, &[1], HoareRule::HAssign, HoareArgs::default());
    let t = lk(t, &[2], LkRule::Id, RuleArgs::default());
    let (t, verdict) = apply_z3_axiom(&t, &at(&[0]), &BoundedArithmetic { lo: -4, hi: 4 }).unwrap();
    assert!(verdict.is_valid());
    t
}

pub fn countdown() -> ProofTree {
    let t = ProofTree::from_triple(
        parse_triple("{x >= 0} while x > 0 do x := x - 1 end {x = 0}").unwrap(),
    );
    let t = hoare(
        t,
        &[],
        HoareRule::HConseq,
        HoareArgs::conseq(f("x >= 0"), f("x >= 0 /\\ ~(x > 0)")),
    );
    let t = lk(t, &[0], LkRule::Id, RuleArgs::default());
    let t = hoare(t, &[1], HoareRule::HWhile, HoareArgs::default());
    hoare(
        t,
        &[1, 0],
        HoareRule::HConseq,
        HoareArgs::conseq(f("x - 1 >= 0"), f("x >= 0")),
    )
}

/// Five small finished or partial trees covering every rule family.
pub const FIXED_TREES: [(&str, fn() -> ProofTree); 5] = [
    ("walkthrough", walkthrough),
    ("partial", partial),
    ("quantifiers", quantifiers),
    ("consequence", consequence),
    ("countdown", countdown),
];

/// Problems with `text` as bussproofs input: unbalanced braces, `$` or
/// environments, or an inference that takes more premises than are on the
/// stack.
pub fn well_formed(text: &str) -> Result<(), String> {
    let mut depth = 0i64;
    let mut dollars = 0;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\\' => {
                // an escaped brace or dollar is literal
                if matches!(chars.peek(), Some('{' | '}' | '$' | '\\')) {
                    chars.next();
                }
            }
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err("closing brace without an opening one".into());
                }
            }
            '$' => dollars += 1,
            _ => {}
        }
    }
    if depth != 0 {
        return Err(format!("{depth} unclosed braces"));
    }
    if dollars % 2 != 0 {
        return Err("odd number of $".into());
    }
    let mut envs = Vec::new();
    let mut stack = 0usize;
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("\\begin{") {
            envs.push(rest.trim_end_matches('}').to_string());
        } else if let Some(rest) = line.strip_prefix("\\end{") {
            if envs.pop().as_deref() != Some(rest.trim_end_matches('}')) {
                return Err(format!("mismatched {line}"));
            }
        } else if line.starts_with("\\AxiomC") {
            stack += 1;
        } else {
            let takes = [
                ("\\UnaryInfC", 1),
                ("\\BinaryInfC", 2),
                ("\\TrinaryInfC", 3),
            ]
            .iter()
            .find(|(cmd, _)| line.starts_with(cmd))
            .map(|(_, n)| *n);
            if let Some(n) = takes {
                if stack < n {
                    return Err(format!("{line} needs {n} premises, {stack} available"));
                }
                stack = stack - n + 1;
            }
        }
    }
    if !envs.is_empty() {
        return Err(format!("unclosed {envs:?}"));
    }
    if stack != 1 {
        return Err(format!("{stack} conclusions left on the stack"));
    }
    Ok(())
}

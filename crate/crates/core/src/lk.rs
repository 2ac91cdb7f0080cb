//! The LK rule set.
//!
//! Rules are read upward: [`apply_lk`] takes the conclusion and produces the
//! premises. Sides are multisets addressed by index; formulas produced on the
//! principal's side replace it in place, formulas moved to the other side are
//! appended at its end.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rule::RuleError;
use crate::syntax::{alpha_eq, is_identifier, Formula, Sequent, Signature, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LkRule {
    Id,
    TruthR,
    FalsityL,
    AndL,
    AndR,
    OrL,
    OrR,
    ImpL,
    ImpR,
    NotL,
    NotR,
    ForallL,
    ForallR,
    ExistsL,
    ExistsR,
    WeakL,
    WeakR,
    ContrL,
    ContrR,
    Cut,
    Z3Axiom,
}

impl LkRule {
    /// Every rule, in menu order.
    pub const ALL: [LkRule; 21] = [
        LkRule::Id,
        LkRule::TruthR,
        LkRule::FalsityL,
        LkRule::AndL,
        LkRule::AndR,
        LkRule::OrL,
        LkRule::OrR,
        LkRule::ImpL,
        LkRule::ImpR,
        LkRule::NotL,
        LkRule::NotR,
        LkRule::ForallL,
        LkRule::ForallR,
        LkRule::ExistsL,
        LkRule::ExistsR,
        LkRule::WeakL,
        LkRule::WeakR,
        LkRule::ContrL,
        LkRule::ContrR,
        LkRule::Cut,
        LkRule::Z3Axiom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LkRule::Id => "Id",
            LkRule::TruthR => "TruthR",
            LkRule::FalsityL => "FalsityL",
            LkRule::AndL => "AndL",
            LkRule::AndR => "AndR",
            LkRule::OrL => "OrL",
            LkRule::OrR => "OrR",
            LkRule::ImpL => "ImpL",
            LkRule::ImpR => "ImpR",
            LkRule::NotL => "NotL",
            LkRule::NotR => "NotR",
            LkRule::ForallL => "ForallL",
            LkRule::ForallR => "ForallR",
            LkRule::ExistsL => "ExistsL",
            LkRule::ExistsR => "ExistsR",
            LkRule::WeakL => "WeakL",
            LkRule::WeakR => "WeakR",
            LkRule::ContrL => "ContrL",
            LkRule::ContrR => "ContrR",
            LkRule::Cut => "Cut",
            LkRule::Z3Axiom => "Z3Axiom",
        }
    }

    pub fn from_name(name: &str) -> Option<LkRule> {
        LkRule::ALL.iter().copied().find(|r| r.name() == name)
    }

    /// The side its principal formula lives on, for rules that have one.
    pub fn principal_side(self) -> Option<Side> {
        use LkRule::*;
        match self {
            FalsityL | AndL | OrL | ImpL | NotL | ForallL | ExistsL | WeakL | ContrL => {
                Some(Side::Left)
            }
            TruthR | AndR | OrR | ImpR | NotR | ForallR | ExistsR | WeakR | ContrR => {
                Some(Side::Right)
            }
            Id | Cut | Z3Axiom => None,
        }
    }

    /// Whether `f` has the shape this rule decomposes.
    fn matches(self, f: &Formula) -> bool {
        use LkRule::*;
        match self {
            TruthR => matches!(f, Formula::True),
            FalsityL => matches!(f, Formula::False),
            AndL | AndR => matches!(f, Formula::And(..)),
            OrL | OrR => matches!(f, Formula::Or(..)),
            ImpL | ImpR => matches!(f, Formula::Implies(..)),
            NotL | NotR => matches!(f, Formula::Not(..)),
            ForallL | ForallR => matches!(f, Formula::Forall(..)),
            ExistsL | ExistsR => matches!(f, Formula::Exists(..)),
            WeakL | WeakR | ContrL | ContrR => true,
            Id | Cut | Z3Axiom => false,
        }
    }

    fn needs_witness(self) -> bool {
        matches!(self, LkRule::ForallL | LkRule::ExistsR)
    }

    fn needs_fresh_var(self) -> bool {
        matches!(self, LkRule::ForallR | LkRule::ExistsL)
    }

    /// Rules that close a goal outright.
    pub fn is_axiom(self) -> bool {
        matches!(
            self,
            LkRule::Id | LkRule::TruthR | LkRule::FalsityL | LkRule::Z3Axiom
        )
    }
}

impl fmt::Display for LkRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A formula's place in a sequent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position {
    pub side: Side,
    pub index: usize,
}

impl Position {
    pub fn left(index: usize) -> Position {
        Position {
            side: Side::Left,
            index,
        }
    }

    pub fn right(index: usize) -> Position {
        Position {
            side: Side::Right,
            index,
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Left => "left",
            Side::Right => "right",
        };
        write!(f, "{side} {}", self.index)
    }
}

/// User-supplied arguments of an LK rule. Each rule demands a specific subset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RuleArgs {
    pub principal: Option<Position>,
    /// Instantiation term for ∀L and ∃R.
    pub witness: Option<Term>,
    /// Eigenvariable for ∀R and ∃L.
    pub fresh_var: Option<String>,
    pub cut_formula: Option<Formula>,
}

impl RuleArgs {
    pub fn at(principal: Position) -> RuleArgs {
        RuleArgs {
            principal: Some(principal),
            ..RuleArgs::default()
        }
    }

    pub fn witness(mut self, t: Term) -> RuleArgs {
        self.witness = Some(t);
        self
    }

    pub fn fresh(mut self, var: impl Into<String>) -> RuleArgs {
        self.fresh_var = Some(var.into());
        self
    }

    pub fn cut(f: Formula) -> RuleArgs {
        RuleArgs {
            cut_formula: Some(f),
            ..RuleArgs::default()
        }
    }
}

/// A checked inference. The only way to obtain one is [`apply_lk`], so every
/// value in existence satisfies its rule's side conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleApplication {
    rule: LkRule,
    args: RuleArgs,
    conclusion: Sequent,
    premises: Vec<Sequent>,
}

impl RuleApplication {
    pub fn rule(&self) -> LkRule {
        self.rule
    }

    pub fn args(&self) -> &RuleArgs {
        &self.args
    }

    pub fn conclusion(&self) -> &Sequent {
        &self.conclusion
    }

    pub fn premises(&self) -> &[Sequent] {
        &self.premises
    }
}

/// Positions where `rule` could take its principal formula in `goal`.
///
/// For `Id` these are the left positions that have an alpha-equal partner on
/// the right. `Cut` and `Z3Axiom` have none.
pub fn candidates(goal: &Sequent, rule: LkRule) -> Vec<Position> {
    match rule {
        LkRule::Id => goal
            .left
            .iter()
            .enumerate()
            .filter(|(_, l)| goal.right.iter().any(|r| alpha_eq(l, r)))
            .map(|(i, _)| Position::left(i))
            .collect(),
        LkRule::Cut | LkRule::Z3Axiom => Vec::new(),
        _ => {
            let side = rule.principal_side().expect("connective rules have a side");
            let formulas = match side {
                Side::Left => &goal.left,
                Side::Right => &goal.right,
            };
            formulas
                .iter()
                .enumerate()
                .filter(|(_, f)| rule.matches(f))
                .map(|(index, _)| Position { side, index })
                .collect()
        }
    }
}

/// Rules worth offering for `goal` together with their candidate positions.
///
/// Connective and quantifier rules appear when their connective is outermost
/// somewhere on the matching side, `Id` when an alpha-equal pair spans the
/// turnstile, structural rules when their side is nonempty. `Cut` and the
/// pseudo-axiom are always offered.
pub fn applicable_lk(goal: &Sequent) -> Vec<(LkRule, Vec<Position>)> {
    LkRule::ALL
        .iter()
        .filter_map(|&rule| {
            let cands = candidates(goal, rule);
            let offered = match rule {
                LkRule::Cut | LkRule::Z3Axiom => true,
                _ => !cands.is_empty(),
            };
            offered.then_some((rule, cands))
        })
        .collect()
}

fn schema(rule: LkRule, args: &RuleArgs) -> Result<(), RuleError> {
    let mismatch = |msg: String| Err(RuleError::SchemaMismatch(msg));
    let name = rule.name();
    if rule == LkRule::Z3Axiom {
        return mismatch("Z3Axiom is discharged by the SMT solver, not by rule application".into());
    }
    if rule.principal_side().is_none() && args.principal.is_some() {
        return mismatch(format!("{name} takes no principal position"));
    }
    if let (Some(side), Some(p)) = (rule.principal_side(), args.principal) {
        if p.side != side {
            return mismatch(format!(
                "{name} acts on the {} side, got position {p}",
                if side == Side::Left { "left" } else { "right" }
            ));
        }
    }
    match (rule.needs_witness(), &args.witness) {
        (true, None) => return mismatch(format!("{name} needs a witness term")),
        (false, Some(_)) => return mismatch(format!("{name} takes no witness term")),
        _ => {}
    }
    match (rule.needs_fresh_var(), &args.fresh_var) {
        (true, None) => return mismatch(format!("{name} needs a fresh variable")),
        (false, Some(_)) => return mismatch(format!("{name} takes no fresh variable")),
        (true, Some(v)) if !is_identifier(v) => {
            return mismatch(format!("`{v}` is not a valid variable name"))
        }
        _ => {}
    }
    match (rule == LkRule::Cut, &args.cut_formula) {
        (true, None) => mismatch("Cut needs a cut formula".into()),
        (false, Some(_)) => mismatch(format!("{name} takes no cut formula")),
        _ => Ok(()),
    }
}

fn principal(goal: &Sequent, rule: LkRule, args: &RuleArgs) -> Result<Position, RuleError> {
    match args.principal {
        Some(p) => {
            let side = match p.side {
                Side::Left => &goal.left,
                Side::Right => &goal.right,
            };
            match side.get(p.index) {
                None => Err(RuleError::NoPrincipal {
                    rule: rule.name(),
                    detail: format!("there is no formula at {p}"),
                }),
                Some(f) if !rule.matches(f) => Err(RuleError::NoPrincipal {
                    rule: rule.name(),
                    detail: format!("`{f}` at {p} does not have the required shape"),
                }),
                Some(_) => Ok(p),
            }
        }
        None => {
            let cands = candidates(goal, rule);
            match cands.len() {
                0 => Err(RuleError::NoPrincipal {
                    rule: rule.name(),
                    detail: "no formula of the required shape".into(),
                }),
                1 => Ok(cands[0]),
                _ => Err(RuleError::AmbiguousPrincipal {
                    rule: rule.name(),
                    candidates: cands,
                }),
            }
        }
    }
}

fn replaced(side: &[Formula], index: usize, with: Vec<Formula>) -> Vec<Formula> {
    let mut out = Vec::with_capacity(side.len() + with.len());
    out.extend_from_slice(&side[..index]);
    out.extend(with);
    out.extend_from_slice(&side[index + 1..]);
    out
}

fn appended(side: &[Formula], f: Formula) -> Vec<Formula> {
    let mut out = side.to_vec();
    out.push(f);
    out
}

fn binary_parts(f: &Formula) -> (Formula, Formula) {
    match f {
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            ((**a).clone(), (**b).clone())
        }
        _ => unreachable!("checked by principal()"),
    }
}

fn binder_parts(f: &Formula) -> (&str, &Formula) {
    match f {
        Formula::Forall(x, body) | Formula::Exists(x, body) => (x, body),
        _ => unreachable!("checked by principal()"),
    }
}

/// Applies `rule` to `goal` reading upward, validating every side condition.
pub fn apply_lk(
    goal: &Sequent,
    rule: LkRule,
    args: &RuleArgs,
) -> Result<RuleApplication, RuleError> {
    use LkRule::*;
    schema(rule, args)?;
    let (l, r) = (&goal.left, &goal.right);
    let seq = Sequent::new;
    let mut resolved = args.clone();

    let premises = match rule {
        Id => {
            if candidates(goal, Id).is_empty() {
                return Err(RuleError::NoPrincipal {
                    rule: "Id",
                    detail: "no formula occurs on both sides".into(),
                });
            }
            vec![]
        }
        Cut => {
            let c = args.cut_formula.clone().expect("checked by schema");
            vec![
                seq(l.clone(), appended(r, c.clone())),
                seq(appended(l, c), r.clone()),
            ]
        }
        Z3Axiom => unreachable!("rejected by schema"),
        _ => {
            let p = principal(goal, rule, args)?;
            resolved.principal = Some(p);
            let i = p.index;
            let pf = match p.side {
                Side::Left => &l[i],
                Side::Right => &r[i],
            };
            match rule {
                TruthR | FalsityL => vec![],
                AndL => {
                    let (a, b) = binary_parts(pf);
                    vec![seq(replaced(l, i, vec![a, b]), r.clone())]
                }
                AndR => {
                    let (a, b) = binary_parts(pf);
                    vec![
                        seq(l.clone(), replaced(r, i, vec![a])),
                        seq(l.clone(), replaced(r, i, vec![b])),
                    ]
                }
                OrL => {
                    let (a, b) = binary_parts(pf);
                    vec![
                        seq(replaced(l, i, vec![a]), r.clone()),
                        seq(replaced(l, i, vec![b]), r.clone()),
                    ]
                }
                OrR => {
                    let (a, b) = binary_parts(pf);
                    vec![seq(l.clone(), replaced(r, i, vec![a, b]))]
                }
                ImpL => {
                    let (a, b) = binary_parts(pf);
                    vec![
                        seq(replaced(l, i, vec![]), appended(r, a)),
                        seq(replaced(l, i, vec![b]), r.clone()),
                    ]
                }
                ImpR => {
                    let (a, b) = binary_parts(pf);
                    vec![seq(appended(l, a), replaced(r, i, vec![b]))]
                }
                NotL => {
                    let Formula::Not(a) = pf else { unreachable!() };
                    vec![seq(replaced(l, i, vec![]), appended(r, (**a).clone()))]
                }
                NotR => {
                    let Formula::Not(a) = pf else { unreachable!() };
                    vec![seq(appended(l, (**a).clone()), replaced(r, i, vec![]))]
                }
                ForallL | ExistsR => {
                    let (x, body) = binder_parts(pf);
                    let t = args.witness.as_ref().expect("checked by schema");
                    let inst = body.substitute(x, t);
                    match p.side {
                        Side::Left => vec![seq(replaced(l, i, vec![inst]), r.clone())],
                        Side::Right => vec![seq(l.clone(), replaced(r, i, vec![inst]))],
                    }
                }
                ForallR | ExistsL => {
                    let (x, body) = binder_parts(pf);
                    let y = args.fresh_var.as_ref().expect("checked by schema");
                    if goal.free_vars().contains(y) {
                        return Err(RuleError::EigenvariableViolation {
                            var: y.clone(),
                            detail: "occurs free in the conclusion".into(),
                        });
                    }
                    let inst = body.substitute(x, &Term::Var(y.clone()));
                    match p.side {
                        Side::Left => vec![seq(replaced(l, i, vec![inst]), r.clone())],
                        Side::Right => vec![seq(l.clone(), replaced(r, i, vec![inst]))],
                    }
                }
                WeakL => vec![seq(replaced(l, i, vec![]), r.clone())],
                WeakR => vec![seq(l.clone(), replaced(r, i, vec![]))],
                ContrL => vec![seq(replaced(l, i, vec![pf.clone(), pf.clone()]), r.clone())],
                ContrR => vec![seq(l.clone(), replaced(r, i, vec![pf.clone(), pf.clone()]))],
                Id | Cut | Z3Axiom => unreachable!(),
            }
        }
    };

    // New material (witnesses, eigenvariables, cut formulas) must respect
    // the symbol roles already fixed by the conclusion.
    let base = Signature::of_sequent(goal)?;
    for p in &premises {
        let mut sig = base.clone();
        sig.add_sequent(p)?;
    }

    Ok(RuleApplication {
        rule,
        args: resolved,
        conclusion: goal.clone(),
        premises,
    })
}

//! Brute-force semantics, written without the kernel's own evaluators.

use std::collections::{BTreeMap, BTreeSet};

use prooftree::smt::{Countermodel, SmtError, SmtVerdict, ValidityOracle};
use prooftree::syntax::{ArithOp, Command, Formula, RelOp, Sequent, Term};

pub type Valuation = BTreeMap<String, bool>;

fn collect_atoms(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Pred(p, args) if args.is_empty() => {
            out.insert(p.clone());
        }
        Formula::Not(a) => collect_atoms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        Formula::True | Formula::False => {}
        other => panic!("not propositional: {other}"),
    }
}

fn propositional(f: &Formula) -> bool {
    match f {
        Formula::Pred(_, args) => args.is_empty(),
        Formula::Not(a) => propositional(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            propositional(a) && propositional(b)
        }
        Formula::True | Formula::False => true,
        _ => false,
    }
}

pub fn is_propositional(s: &Sequent) -> bool {
    s.left.iter().chain(&s.right).all(propositional)
}

/// Atoms of a propositional sequent. Panics on anything first-order.
pub fn atoms(s: &Sequent) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for f in s.left.iter().chain(&s.right) {
        collect_atoms(f, &mut out);
    }
    out
}

pub fn truth(f: &Formula, v: &Valuation) -> bool {
    match f {
        Formula::Pred(p, _) => v[p],
        Formula::True => true,
        Formula::False => false,
        Formula::Not(a) => !truth(a, v),
        Formula::And(a, b) => truth(a, v) && truth(b, v),
        Formula::Or(a, b) => truth(a, v) || truth(b, v),
        Formula::Implies(a, b) => !truth(a, v) || truth(b, v),
        other => panic!("not propositional: {other}"),
    }
}

/// Conjunction of the left side implies disjunction of the right side.
pub fn holds(s: &Sequent, v: &Valuation) -> bool {
    !s.left.iter().all(|f| truth(f, v)) || s.right.iter().any(|f| truth(f, v))
}

/// Every valuation of the sequent's atoms, in binary counting order.
pub fn valuations(names: &BTreeSet<String>) -> impl Iterator<Item = Valuation> + '_ {
    assert!(names.len() <= 20, "too many atoms for brute force");
    (0u32..1 << names.len()).map(move |bits| {
        names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), bits & (1 << i) != 0))
            .collect()
    })
}

/// The first falsifying valuation, if any.
pub fn counterexample(s: &Sequent) -> Option<Valuation> {
    let names = atoms(s);
    let found = valuations(&names).find(|v| !holds(s, v));
    found
}

pub fn valid(s: &Sequent) -> bool {
    counterexample(s).is_none()
}

/// Answers validity of propositional goals by truth table.
pub struct TruthTable;

/// Answers unknown on first-order goals.
impl ValidityOracle for TruthTable {
    fn check(&self, goal: &Sequent) -> Result<SmtVerdict, SmtError> {
        if !is_propositional(goal) {
            return Ok(SmtVerdict::Unknown {
                reason: prooftree::smt::UnknownReason::SolverUnknown,
            });
        }
        Ok(match counterexample(goal) {
            None => SmtVerdict::Valid,
            Some(v) => SmtVerdict::Invalid {
                model: Countermodel {
                    bool_atoms: v,
                    ..Countermodel::default()
                },
            },
        })
    }
}

/// Whether a countermodel falsifies a propositional sequent, reading only
/// its atom table. Atoms the model omits count as false.
pub fn model_falsifies(model: &Countermodel, s: &Sequent) -> bool {
    let v: Valuation = atoms(s)
        .into_iter()
        .map(|a| {
            let b = model.bool_atoms.get(&a).copied().unwrap_or(false);
            (a, b)
        })
        .collect();
    !holds(s, &v)
}

// ---------------------------------------------------------------------------
// Integer arithmetic

pub type Env = BTreeMap<String, i64>;

pub fn value(t: &Term, env: &Env) -> Option<i64> {
    match t {
        Term::Var(x) => env.get(x).copied(),
        Term::Int(n) => Some(*n),
        Term::Arith(op, a, b) => {
            let (a, b) = (value(a, env)?, value(b, env)?);
            match op {
                ArithOp::Add => a.checked_add(b),
                ArithOp::Sub => a.checked_sub(b),
                ArithOp::Mul => a.checked_mul(b),
            }
        }
        Term::App(..) => None,
    }
}

/// Truth of a quantifier-free arithmetic formula. `None` if it mentions
/// anything else or overflows.
pub fn arith_truth(f: &Formula, env: &Env) -> Option<bool> {
    Some(match f {
        Formula::Rel(op, a, b) => {
            let (a, b) = (value(a, env)?, value(b, env)?);
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
        Formula::Not(a) => !arith_truth(a, env)?,
        Formula::And(a, b) => arith_truth(a, env)? && arith_truth(b, env)?,
        Formula::Or(a, b) => arith_truth(a, env)? || arith_truth(b, env)?,
        Formula::Implies(a, b) => !arith_truth(a, env)? || arith_truth(b, env)?,
        _ => return None,
    })
}

/// All assignments of `vars` to values in `lo..=hi`.
pub fn boxes(vars: &[String], lo: i64, hi: i64) -> Vec<Env> {
    let mut out = vec![Env::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|env| {
                (lo..=hi).map(move |n| {
                    let mut e = env.clone();
                    e.insert(v.clone(), n);
                    e
                })
            })
            .collect();
    }
    out
}

/// Runs a command, giving up after `fuel` loop iterations.
pub fn exec(c: &Command, env: &mut Env, fuel: &mut u32) -> Option<()> {
    match c {
        Command::Skip => {}
        Command::Assign(x, e) => {
            let v = value(e, env)?;
            env.insert(x.clone(), v);
        }
        Command::Seq(a, b) => {
            exec(a, env, fuel)?;
            exec(b, env, fuel)?;
        }
        Command::If(b, c1, c2) => {
            if arith_truth(b, env)? {
                exec(c1, env, fuel)?
            } else {
                exec(c2, env, fuel)?
            }
        }
        Command::While(b, body) => {
            while arith_truth(b, env)? {
                *fuel = fuel.checked_sub(1)?;
                exec(body, env, fuel)?;
            }
        }
    }
    Some(())
}

/// Decides arithmetic sequents by checking every assignment of their free
/// variables in `lo..=hi`. Sound only for the bounded domain; tests use it
/// where that is the intended semantics.
pub struct BoundedArithmetic {
    pub lo: i64,
    pub hi: i64,
}

impl BoundedArithmetic {
    pub fn holds_everywhere(&self, s: &Sequent) -> Option<bool> {
        let vars: Vec<String> = s.free_vars().into_iter().collect();
        for env in boxes(&vars, self.lo, self.hi) {
            let left = s
                .left
                .iter()
                .map(|f| arith_truth(f, &env))
                .collect::<Option<Vec<_>>>()?;
            let right = s
                .right
                .iter()
                .map(|f| arith_truth(f, &env))
                .collect::<Option<Vec<_>>>()?;
            if left.iter().all(|b| *b) && !right.iter().any(|b| *b) {
                return Some(false);
            }
        }
        Some(true)
    }
}

impl ValidityOracle for BoundedArithmetic {
    fn check(&self, goal: &Sequent) -> Result<SmtVerdict, SmtError> {
        Ok(match self.holds_everywhere(goal) {
            Some(true) => SmtVerdict::Valid,
            Some(false) => SmtVerdict::Invalid {
                model: Countermodel::default(),
            },
            None => SmtVerdict::Unknown {
                reason: prooftree::smt::UnknownReason::SolverUnknown,
            },
        })
    }
}

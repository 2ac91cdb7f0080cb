//! Seeded random syntax.
//!
//! Every generator draws from a caller-supplied RNG, so a seed fixes the
//! whole sample. Names are drawn from fixed pools with fixed roles and
//! arities, so generated goals always have a consistent signature.

use prooftree::syntax::{Command, Formula, HoareTriple, RelOp, Sequent, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const VARS: [&str; 4] = ["x", "y", "z", "w"];
pub const ATOMS: [&str; 3] = ["p", "q", "r"];

/// Propositional atom number `i`.
pub fn atom_name(i: usize) -> String {
    format!("p{i}")
}

/// Quantifier-free propositional formula over `p0 … p{atoms-1}` with
/// nesting depth at most `depth`.
pub fn prop_formula(rng: &mut impl Rng, atoms: usize, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..20) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(atom_name(rng.gen_range(0..atoms))),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..4) {
        0 => Formula::not(prop_formula(rng, atoms, d)),
        1 => Formula::and(prop_formula(rng, atoms, d), prop_formula(rng, atoms, d)),
        2 => Formula::or(prop_formula(rng, atoms, d), prop_formula(rng, atoms, d)),
        _ => Formula::implies(prop_formula(rng, atoms, d), prop_formula(rng, atoms, d)),
    }
}

/// Propositional sequent with up to `max_side` formulas per side.
pub fn prop_sequent<R: Rng>(rng: &mut R, atoms: usize, depth: usize, max_side: usize) -> Sequent {
    let side = |rng: &mut R| {
        let n = rng.gen_range(0..=max_side);
        (0..n)
            .map(|_| prop_formula(rng, atoms, depth))
            .collect::<Vec<_>>()
    };
    let left = side(rng);
    let right = side(rng);
    Sequent::new(left, right)
}

pub fn int(rng: &mut impl Rng) -> i64 {
    match rng.gen_range(0..20) {
        0 => i64::MAX,
        1 => i64::MIN,
        _ => rng.gen_range(-20..=20),
    }
}

/// Integer term over `VARS`, unary `f` and binary `g`.
pub fn term(rng: &mut impl Rng, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.4) {
        return if rng.gen_bool(0.6) {
            Term::var(*VARS.choose(rng).unwrap())
        } else {
            Term::int(int(rng))
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 => Term::add(term(rng, d), term(rng, d)),
        1 => Term::sub(term(rng, d), term(rng, d)),
        2 => Term::mul(term(rng, d), term(rng, d)),
        3 => Term::app("f", vec![term(rng, d)]),
        _ => Term::app("g", vec![term(rng, d), term(rng, d)]),
    }
}

fn rel_op(rng: &mut impl Rng) -> RelOp {
    *[RelOp::Eq, RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge]
        .choose(rng)
        .unwrap()
}

/// First-order formula: atoms, unary `P`, binary `Q`, relations over
/// integer terms and quantifiers over `VARS`.
pub fn fo_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        let td = depth.min(2);
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            2 | 3 => Formula::atom(*ATOMS.choose(rng).unwrap()),
            4 | 5 => Formula::pred("P", vec![term(rng, td)]),
            6 => Formula::pred("Q", vec![term(rng, td), term(rng, td)]),
            _ => Formula::rel(rel_op(rng), term(rng, td), term(rng, td)),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..7) {
        0 => Formula::not(fo_formula(rng, d)),
        1 => Formula::and(fo_formula(rng, d), fo_formula(rng, d)),
        2 => Formula::or(fo_formula(rng, d), fo_formula(rng, d)),
        3 => Formula::implies(fo_formula(rng, d), fo_formula(rng, d)),
        4 => Formula::forall(*VARS.choose(rng).unwrap(), fo_formula(rng, d)),
        5 => Formula::exists(*VARS.choose(rng).unwrap(), fo_formula(rng, d)),
        _ => fo_formula(rng, d),
    }
}

pub fn fo_sequent<R: Rng>(rng: &mut R, depth: usize, max_side: usize) -> Sequent {
    let side = |rng: &mut R| {
        let n = rng.gen_range(0..=max_side);
        (0..n).map(|_| fo_formula(rng, depth)).collect::<Vec<_>>()
    };
    let left = side(rng);
    let right = side(rng);
    Sequent::new(left, right)
}

/// Quantifier-free condition over program variables.
pub fn condition(rng: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.5) {
        return Formula::rel(rel_op(rng), arith_term(rng, 1), arith_term(rng, 1));
    }
    let d = depth - 1;
    match rng.gen_range(0..3) {
        0 => Formula::not(condition(rng, d)),
        1 => Formula::and(condition(rng, d), condition(rng, d)),
        _ => Formula::or(condition(rng, d), condition(rng, d)),
    }
}

/// Term over the first three variables and small literals, no functions.
pub fn arith_term(rng: &mut impl Rng, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.5) {
        return if rng.gen_bool(0.6) {
            Term::var(VARS[rng.gen_range(0..3)])
        } else {
            Term::int(rng.gen_range(-3..=3))
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..3) {
        0 => Term::add(arith_term(rng, d), arith_term(rng, d)),
        1 => Term::sub(arith_term(rng, d), arith_term(rng, d)),
        _ => Term::mul(arith_term(rng, d), arith_term(rng, d)),
    }
}

/// Command over `x`, `y`, `z`. Loops only when `loops` is set.
pub fn command(rng: &mut impl Rng, depth: usize, loops: bool) -> Command {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.15) {
            Command::Skip
        } else {
            Command::assign(VARS[rng.gen_range(0..3)], arith_term(rng, 2))
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..if loops { 4 } else { 3 }) {
        0 | 1 => Command::seq(command(rng, d, loops), command(rng, d, loops)),
        2 => Command::if_(
            condition(rng, 1),
            command(rng, d, loops),
            command(rng, d, loops),
        ),
        _ => Command::while_(condition(rng, 1), command(rng, d, loops)),
    }
}

pub fn triple(rng: &mut impl Rng, depth: usize, loops: bool) -> HoareTriple {
    HoareTriple::new(
        condition(rng, 2),
        command(rng, depth, loops),
        condition(rng, 2),
    )
}

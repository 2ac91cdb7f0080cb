//! Test support for the prooftree crates: seeded generators, brute-force
//! oracles and random tree surgery.

pub mod fuzz;
pub mod gen;
pub mod latex;
pub mod oracle;
pub mod spelling;
pub mod tamper;

use prooftree::smt::{SolverConfig, SOLVER_ENV};

/// The solver to use in tests: `PROOFTREE_SOLVER` if set, else `z3` when it
/// is on the `PATH`.
pub fn solver() -> Option<SolverConfig> {
    if let Some(cfg) = SolverConfig::from_env() {
        return Some(cfg);
    }
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path)
        .map(|dir| dir.join("z3"))
        .find(|p| p.is_file())
        .map(SolverConfig::z3)
}

/// Prints why a solver test is skipped and returns `None`.
pub fn solver_or_skip(test: &str) -> Option<SolverConfig> {
    let s = solver();
    if s.is_none() {
        eprintln!("{test}: skipped, no SMT solver (set {SOLVER_ENV} or put z3 on PATH)");
    }
    s
}

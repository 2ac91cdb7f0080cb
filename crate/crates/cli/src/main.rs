use std::cell::Cell;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use prooftree::auto::{auto_prove, Limits, Outcome, DEFAULT_MAX_DEPTH};
use prooftree::latex::{to_latex, to_latex_document};
use prooftree::persist::{load_proof, save_proof, serialize, uses_pseudo_axiom};
use prooftree::smt::{check_validity, SmtError, SmtVerdict, Solver, ValidityOracle};
use prooftree::{parse_preview, parse_sequent, ParseError, Sequent, SyntaxKind};
use prooftree_cli::config::{load_file_config, resolve_solver, resolve_timeout, FileConfig};
use prooftree_cli::outline::outline;
use prooftree_cli::service::{Service, ServiceConfig};

const EXIT_FAILURE: u8 = 1;
const EXIT_STUCK: u8 = 2;
const EXIT_INVALID: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_UNAVAILABLE: u8 = 69;

#[derive(Parser)]
#[command(
    name = "prooftree",
    version,
    about = "Build and check LK and Hoare logic proof trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse text and print its canonical form.
    Parse {
        /// sequent, triple, formula or term
        kind: SyntaxKind,
        text: String,
    },
    /// Run the propositional proof search on a sequent.
    Auto {
        sequent: String,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        /// Print the tree as LaTeX instead of an outline.
        #[arg(long)]
        latex: bool,
        /// Also save the tree, finished or not, as a proof file.
        #[arg(long, value_name = "FILE")]
        save: Option<PathBuf>,
    },
    /// Replay a saved proof, re-running every rule check.
    Check {
        file: PathBuf,
        /// Ask the solver again about every pseudo-axiom step.
        #[arg(long)]
        recheck_z3: bool,
        #[arg(long)]
        solver: Option<PathBuf>,
    },
    /// Print a saved proof as LaTeX.
    Latex {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Wrap the tree in a compilable document.
        #[arg(long)]
        standalone: bool,
    },
    /// Ask the SMT solver whether a sequent is valid.
    Z3 {
        sequent: String,
        /// Seconds.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        solver: Option<PathBuf>,
    },
    /// Run the session service on localhost.
    Serve {
        #[arg(long, default_value_t = 7171)]
        port: u16,
        #[arg(long)]
        solver: Option<PathBuf>,
        /// Default solver timeout in seconds.
        #[arg(long)]
        timeout: Option<f64>,
    },
}

fn parse_failure(input: &str, e: &ParseError) -> ExitCode {
    eprintln!(
        "parse error at line {}, column {}: {}",
        e.line, e.column, e.message
    );
    if let Some(line) = input.split('\n').nth(e.line - 1) {
        eprintln!("  {line}");
        eprintln!("  {}^", " ".repeat(e.column - 1));
    }
    ExitCode::from(EXIT_FAILURE)
}

fn file_config() -> Result<FileConfig, ExitCode> {
    load_file_config().map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_USAGE)
    })
}

fn read_file(path: &PathBuf) -> Result<Vec<u8>, ExitCode> {
    std::fs::read(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_FAILURE)
    })
}

/// Remembers whether the solver was missing.
struct Recording {
    solver: Solver,
    missing: Cell<bool>,
}

impl ValidityOracle for Recording {
    fn check(&self, goal: &Sequent) -> Result<SmtVerdict, SmtError> {
        let r = self.solver.check(goal);
        if matches!(r, Err(SmtError::SolverNotFound(_))) {
            self.missing.set(true);
        }
        r
    }
}

fn run(command: Command) -> Result<ExitCode, ExitCode> {
    match command {
        Command::Parse { kind, text } => match parse_preview(&text, kind) {
            Ok(p) => {
                println!("{}", p.canonical_text());
                Ok(ExitCode::SUCCESS)
            }
            Err(e) => Err(parse_failure(&text, &e)),
        },
        Command::Auto {
            sequent,
            max_depth,
            latex,
            save,
        } => {
            let goal = parse_sequent(&sequent).map_err(|e| parse_failure(&sequent, &e))?;
            let r = auto_prove(&goal, Limits::depth(max_depth));
            match &r.outcome {
                Outcome::Completed => eprintln!("completed in {} steps", r.steps),
                Outcome::Stuck { path, reason } => eprintln!("stuck at {path}: {reason}"),
            }
            if let Some(path) = save {
                std::fs::write(&path, serialize(&save_proof(&r.tree))).map_err(|e| {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    ExitCode::from(EXIT_FAILURE)
                })?;
            }
            if latex {
                print!("{}", to_latex(&r.tree));
            } else {
                print!("{}", outline(&r.tree));
            }
            Ok(if r.is_completed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_STUCK)
            })
        }
        Command::Check {
            file,
            recheck_z3,
            solver,
        } => {
            let bytes = read_file(&file)?;
            let cfg = file_config()?;
            let oracle = Recording {
                solver: Solver::new(resolve_solver(solver.as_deref(), &cfg))
                    .with_timeout(resolve_timeout(None, &cfg)),
                missing: Cell::new(false),
            };
            let recheck: Option<&dyn ValidityOracle> =
                if recheck_z3 { Some(&oracle) } else { None };
            match load_proof(&bytes, recheck) {
                Ok(tree) => {
                    let holes = tree.holes().len();
                    let status = if holes == 0 {
                        "complete".to_string()
                    } else {
                        format!("incomplete, {holes} open goal(s)")
                    };
                    let pseudo = if !uses_pseudo_axiom(&tree) {
                        ""
                    } else if recheck_z3 {
                        ", pseudo-axioms rechecked by the solver"
                    } else {
                        ", pseudo-axioms not rechecked"
                    };
                    println!("ok: {} ({status}{pseudo})", tree.goal());
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    if oracle.missing.get() {
                        return Err(ExitCode::from(EXIT_UNAVAILABLE));
                    }
                    Err(ExitCode::from(EXIT_FAILURE))
                }
            }
        }
        Command::Latex {
            file,
            output,
            standalone,
        } => {
            let bytes = read_file(&file)?;
            let tree = load_proof(&bytes, None).map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_FAILURE)
            })?;
            let text = if standalone {
                to_latex_document(&tree)
            } else {
                to_latex(&tree)
            };
            match output {
                Some(path) => std::fs::write(&path, text).map_err(|e| {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    ExitCode::from(EXIT_FAILURE)
                })?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Z3 {
            sequent,
            timeout,
            solver,
        } => {
            let goal = parse_sequent(&sequent).map_err(|e| parse_failure(&sequent, &e))?;
            let cfg = file_config()?;
            let solver = resolve_solver(solver.as_deref(), &cfg);
            match check_validity(&goal, &solver, resolve_timeout(timeout, &cfg)) {
                Ok(SmtVerdict::Valid) => {
                    println!("valid");
                    Ok(ExitCode::SUCCESS)
                }
                Ok(SmtVerdict::Invalid { model }) => {
                    println!("invalid");
                    println!("countermodel: {model}");
                    Ok(ExitCode::from(EXIT_INVALID))
                }
                Ok(SmtVerdict::Unknown { reason }) => {
                    println!("unknown ({reason})");
                    Ok(ExitCode::from(EXIT_UNKNOWN))
                }
                Err(e @ SmtError::SolverNotFound(_)) => {
                    eprintln!("error: {e}");
                    Err(ExitCode::from(EXIT_UNAVAILABLE))
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Err(ExitCode::from(EXIT_FAILURE))
                }
            }
        }
        Command::Serve {
            port,
            solver,
            timeout,
        } => {
            let cfg = file_config()?;
            let service = Service::new(ServiceConfig {
                solver: resolve_solver(solver.as_deref(), &cfg),
                timeout: resolve_timeout(timeout, &cfg),
            });
            let runtime = tokio::runtime::Runtime::new().map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_FAILURE)
            })?;
            runtime
                .block_on(prooftree_cli::http::serve(service, port))
                .map_err(|e| {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_FAILURE)
                })?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    run(cli.command).unwrap_or_else(|code| code)
}

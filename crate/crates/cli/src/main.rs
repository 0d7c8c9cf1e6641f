//! `propcnf`: convert, compare and check propositional formulas.
//!
//! Results go to stdout and diagnostics to stderr. Exit codes:
//!
//! * 0: success
//! * 1: syntax error, or `->` given to `check`
//! * 2: output budget or CPS depth bound exceeded
//! * 3: `--trace` requested with an engine other than `machine`
//! * 4: `equiv`: the formulas are not equivalent
//! * 5: `equiv`: too many atoms
//! * 6: `check`: a normal-form predicate fails
//! * 7: checked-mode violation or I/O failure
//! * 64: invalid command line

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use propcnf::machine::{self, JsonLines};
use propcnf::oracle::{self, Equivalence};
use propcnf::{dimacs, syntax, wf, Engine, Error, Options, DEFAULT_MAX_NODES};

/// Conversions and checks run on a thread with this much stack, so deeply
/// nested input does not overflow the recursive parser and direct engine.
const WORKER_STACK: usize = 512 << 20;

#[derive(Parser)]
#[command(name = "propcnf", version, about = "Propositional formulas to conjunctive normal form")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a formula to conjunctive normal form.
    Convert {
        formula: String,
        #[arg(long, value_enum, default_value_t = EngineArg::Direct)]
        engine: EngineArg,
        /// Print DIMACS CNF instead of a formula.
        #[arg(long)]
        dimacs: bool,
        /// Write the machine trace as JSON lines (machine engine only).
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        /// Verify pre- and postconditions, post relations and stack invariants.
        #[arg(long)]
        checked: bool,
        /// Largest output, in formula nodes.
        #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: u64,
    },
    /// Decide whether two formulas are logically equivalent.
    Equiv { left: String, right: String },
    /// Check an implication-free formula for negation and conjunctive
    /// normal form (both when neither flag is given).
    Check {
        formula: String,
        #[arg(long)]
        nnf: bool,
        #[arg(long)]
        cnf: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Direct,
    Cps,
    Machine,
}

impl From<EngineArg> for Engine {
    fn from(arg: EngineArg) -> Engine {
        match arg {
            EngineArg::Direct => Engine::Direct,
            EngineArg::Cps => Engine::Cps,
            EngineArg::Machine => Engine::Machine,
        }
    }
}

/// A failed command: exit code and the diagnostic for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Syntax(_) | Error::InvalidIdent(_) | Error::ContainsImplication => 1,
            Error::OutputBudgetExceeded { .. } | Error::CpsDepthExceeded { .. } => 2,
            Error::TooManyAtoms { .. } => 5,
            _ => 7,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::new(7, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let worker = std::thread::Builder::new()
        .stack_size(WORKER_STACK)
        .spawn(move || run(cli.command));
    let outcome = match worker {
        Ok(handle) => handle.join().unwrap_or_else(|_| Err(Failure::new(7, "internal error"))),
        Err(e) => Err(e.into()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("propcnf: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Convert {
            formula,
            engine,
            dimacs,
            trace,
            checked,
            max_nodes,
        } => {
            let engine = Engine::from(engine);
            if trace.is_some() && engine != Engine::Machine {
                return Err(Failure::new(3, "--trace requires --engine machine"));
            }
            let phi = syntax::parse(&formula)?;
            let options = Options {
                checked,
                max_nodes,
                ..Options::default()
            };
            let cnf = match trace {
                Some(path) => {
                    let mut sink = JsonLines::new(BufWriter::new(File::create(&path)?));
                    let cnf = machine::to_cnf_machine(&phi, &options, Some(&mut sink));
                    sink.finish()?;
                    cnf?
                }
                None => engine.to_cnf(&phi, &options)?,
            };
            if dimacs {
                write!(out, "{}", dimacs::to_dimacs(&cnf)?)?;
            } else {
                writeln!(out, "{cnf}")?;
            }
        }
        Command::Equiv { left, right } => {
            let (phi, psi) = (syntax::parse(&left)?, syntax::parse(&right)?);
            match oracle::equivalent_formulas(&phi, &psi)? {
                Equivalence::Equivalent => writeln!(out, "equivalent")?,
                Equivalence::Counterexample(v) => {
                    writeln!(out, "{v}")?;
                    return Err(Failure::new(4, ""));
                }
            }
        }
        Command::Check { formula, nnf, cnf } => {
            let phi = syntax::parse_wi(&formula)?;
            let (nnf, cnf) = if nnf || cnf { (nnf, cnf) } else { (true, true) };
            let checks = [
                (nnf, wf::NNF, wf::wf_negations_of_literals as fn(&_) -> bool),
                (cnf, wf::CNF, wf::wf_conjunctions_of_disjunctions),
            ];
            for (wanted, name, predicate) in checks {
                if wanted && !predicate(&phi) {
                    writeln!(out, "{name}")?;
                    return Err(Failure::new(6, ""));
                }
            }
            writeln!(out, "ok")?;
        }
    }
    out.flush()?;
    Ok(())
}

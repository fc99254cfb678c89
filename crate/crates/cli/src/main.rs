use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pie_core::document::{
    expand_text, load_document, process_document, standalone_latex, ProcessingContext,
};
use pie_core::elimination::{eliminate, EliminationOptions, EliminationOutcome};
use pie_core::interpolation::{
    emit_tableau_dot, interpolate, InterpolationOptions, InterpolationTask,
};
use pie_core::macros::MacroTable;
use pie_core::preprocess::{clausify, ClausifyMode, Stage};
use pie_core::prover::{reduce_so_universal, validate, ProverConfig, ValidationResult};
use pie_core::syntax::{emit_dimacs, emit_tptp, to_text, TptpRole};
use pie_core::Formula;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "pie",
    version,
    about = "First-order logic workbench: elimination, interpolation, validity and literate documents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    C6,
    D6,
}

impl From<StageArg> for Stage {
    fn from(s: StageArg) -> Stage {
        match s {
            StageArg::C6 => Stage::C6,
            StageArg::D6 => Stage::D6,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RoleArg {
    Axiom,
    Conjecture,
}

#[derive(Subcommand)]
enum Command {
    /// Process a document into LaTeX.
    Process {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Emit only the body, without preamble.
        #[arg(long)]
        body_only: bool,
    },
    /// Expand the macros of a formula.
    Expand {
        formula: String,
        /// Document supplying macro definitions.
        #[arg(long)]
        doc: Option<PathBuf>,
    },
    /// Eliminate second-order quantifiers.
    Elim {
        formula: String,
        #[arg(long, value_enum)]
        pre: Vec<StageArg>,
        #[arg(long, value_enum)]
        simp: Vec<StageArg>,
        #[arg(long)]
        doc: Option<PathBuf>,
    },
    /// Compute a Craig-Lyndon interpolant of an implication.
    Ipol {
        implication: String,
        /// Skip the simplification of both sides.
        #[arg(long)]
        no_simp_sides: bool,
        /// Write the closed tableau as DOT to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        doc: Option<PathBuf>,
    },
    /// Decide validity: prover and countermodel search.
    Valid {
        formula: String,
        #[arg(long)]
        doc: Option<PathBuf>,
    },
    /// Print a formula as a TPTP FOF annotated formula.
    Tptp {
        formula: String,
        #[arg(long, default_value = "f")]
        name: String,
        #[arg(long, value_enum, default_value = "conjecture")]
        role: RoleArg,
        #[arg(long)]
        doc: Option<PathBuf>,
    },
    /// Print the clausal form of a propositional formula in DIMACS.
    Dimacs {
        formula: String,
        #[arg(long)]
        doc: Option<PathBuf>,
    },
}

struct Failure(u8, String);

fn usage(msg: impl ToString) -> Failure {
    Failure(EXIT_USAGE, msg.to_string())
}

fn table_from(doc: Option<&Path>) -> Result<MacroTable, Failure> {
    let Some(path) = doc else {
        return Ok(MacroTable::new());
    };
    let src =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    load_document(&src)
        .map(|(_, t)| t)
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_formula(text: &str, doc: Option<&Path>) -> Result<Formula, Failure> {
    expand_text(&table_from(doc)?, text).map_err(usage)
}

fn prover_config() -> ProverConfig {
    let mut cfg = ProverConfig::default();
    if let Ok(Some(t)) = pie_core::document::OptionSet::system().timeout() {
        cfg.timeout = t;
    }
    cfg
}

/// Output for standard output and the exit status.
fn run(cmd: Command) -> Result<(String, u8), Failure> {
    match cmd {
        Command::Process {
            file,
            output,
            body_only,
        } => {
            let src = std::fs::read_to_string(&file)
                .map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let (doc, table) =
                load_document(&src).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let mut ctx = ProcessingContext::new(table);
            let body = process_document(&doc, &mut ctx)
                .map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
            let tex = if body_only {
                body
            } else {
                standalone_latex(&body)
            };
            match output {
                Some(path) => {
                    std::fs::write(&path, tex)
                        .map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
                    Ok((String::new(), 0))
                }
                None => Ok((tex, 0)),
            }
        }
        Command::Expand { formula, doc } => {
            Ok((to_text(&read_formula(&formula, doc.as_deref())?), 0))
        }
        Command::Elim {
            formula,
            pre,
            simp,
            doc,
        } => {
            let f = read_formula(&formula, doc.as_deref())?;
            let mut opts = EliminationOptions {
                pre: pre.into_iter().map(Stage::from).collect(),
                simp_result: simp.into_iter().map(Stage::from).collect(),
                ..EliminationOptions::default()
            };
            opts.timeout = prover_config().timeout.max(opts.timeout);
            match eliminate(&f, &opts) {
                EliminationOutcome::Success(g) => Ok((to_text(&g), 0)),
                EliminationOutcome::Failure { reason, residue } => Err(Failure(
                    EXIT_FAILURE,
                    format!("elimination failed ({reason}): {}", to_text(&residue)),
                )),
            }
        }
        Command::Ipol {
            implication,
            no_simp_sides,
            dot,
            doc,
        } => {
            let f = read_formula(&implication, doc.as_deref())?;
            let opts = InterpolationOptions {
                simp_sides: !no_simp_sides,
                prover: prover_config(),
            };
            let task = InterpolationTask::from_implication(&f, opts).map_err(usage)?;
            let h = interpolate(&task)
                .map_err(|e| Failure(EXIT_FAILURE, format!("interpolation failed: {e}")))?;
            if let Some(path) = dot {
                std::fs::write(&path, emit_tableau_dot(&h.proof.tableau))
                    .map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
            }
            Ok((to_text(&h.formula), 0))
        }
        Command::Valid { formula, doc } => {
            let f = read_formula(&formula, doc.as_deref())?;
            let f = if f.is_first_order() {
                f
            } else {
                match reduce_so_universal(&f) {
                    Ok(g) => g,
                    Err(e) => return Ok((format!("failed to validate: {e}"), EXIT_FAILURE)),
                }
            };
            match validate(&f, &prover_config()) {
                ValidationResult::Valid(_) => Ok(("valid".into(), 0)),
                ValidationResult::NotValid(m) => {
                    Ok((format!("not valid; countermodel {m}"), EXIT_FAILURE))
                }
                ValidationResult::Failed(e) => {
                    Ok((format!("failed to validate: {e}"), EXIT_FAILURE))
                }
            }
        }
        Command::Tptp {
            formula,
            name,
            role,
            doc,
        } => {
            let f = read_formula(&formula, doc.as_deref())?;
            let role = match role {
                RoleArg::Axiom => TptpRole::Axiom,
                RoleArg::Conjecture => TptpRole::Conjecture,
            };
            emit_tptp(&name, role, &f).map(|t| (t, 0)).map_err(usage)
        }
        Command::Dimacs { formula, doc } => {
            let f = read_formula(&formula, doc.as_deref())?;
            let cf = clausify(&f, ClausifyMode::Definitional).map_err(usage)?;
            let d = emit_dimacs(&cf).map_err(usage)?;
            let legend: String = d
                .atoms
                .iter()
                .enumerate()
                .map(|(i, a)| format!("c {} {a}\n", i + 1))
                .collect();
            Ok((format!("{legend}{}", d.text.trim_end()), 0))
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
    match run(cli.command) {
        Ok((out, code)) => {
            if !out.is_empty() {
                println!("{out}");
            }
            ExitCode::from(code)
        }
        Err(Failure(code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}

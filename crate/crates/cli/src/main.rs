//! `phl`: command-line front end for partial Horn logic.
//!
//! Exit status: 0 when the answer is yes (a model, a proof, a fixed point),
//! 1 when it is no and a witness is printed, 2 when the budget ran out, and
//! 10 or more for usage, parse, well-formedness and I/O errors.

mod commands;
mod error;
mod report;
mod workspace;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use phl_core::prover::Budget;
use serde_json::json;

use commands::{BirkhoffArgs, Report};
use error::CliError;
use workspace::Workspace;

const DEFAULT_DEPTH: usize = 4;
const DEFAULT_MODEL_SIZE: usize = 4;
const DEPTH_VAR: &str = "PHL_BUDGET_DEPTH";

#[derive(Parser)]
#[command(name = "phl", version, about = "Partial Horn logic: proofs, free models, factorizations and definability")]
struct Cli {
    /// Print a machine-readable JSON report on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Saturation rounds [default: $PHL_BUDGET_DEPTH or 4].
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Largest carrier per sort for model searches and pools.
    #[arg(short = 'k', long = "model-size", global = true, default_value_t = DEFAULT_MODEL_SIZE)]
    k: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the models in a file against a theory, or a derivation file.
    Check { theory: String, file: PathBuf },
    /// Decide a sequent up to the budget.
    Prove { theory: String, sequent: String },
    /// Print the representing model of `[x:s, ...] . FORMULA`.
    Free { theory: String, formula: String },
    /// Factor a homomorphism into a dense part and a closed mono.
    Factor {
        theory: String,
        /// A file with model blocks followed by hom blocks.
        file: PathBuf,
        /// Which hom to factor; the first one by default.
        #[arg(long)]
        hom: Option<String>,
    },
    /// Translate a sequent along a morphism, or take reducts of target models.
    Translate {
        morphism: PathBuf,
        /// A sequent of the source theory, or a file of target models.
        input: Option<String>,
        /// Also prove the translated axioms of the source theory.
        #[arg(long)]
        check: bool,
    },
    /// Print the partial Horn theory of a finite limit sketch.
    Sketch2pht { file: PathBuf },
    /// Test whether a class of finite models is closed, and whether judgments define it.
    Birkhoff {
        theory: String,
        /// Directory of `.model` files; all models up to `-k` by default.
        #[arg(long)]
        pool: Option<PathBuf>,
        /// A theory file whose axioms select the class from the pool.
        #[arg(long)]
        class: Option<PathBuf>,
        /// A theory file whose axioms are the defining judgments.
        #[arg(long)]
        judgments: Option<PathBuf>,
    },
    /// Pretty-print a theory, model, morphism, relative theory, sketch or derivation.
    Fmt {
        file: PathBuf,
        /// Theory for model files without a resolvable header, and for derivations.
        #[arg(long)]
        theory: Option<String>,
    },
}

fn depth(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(d) = flag {
        return Ok(d);
    }
    match std::env::var(DEPTH_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{DEPTH_VAR} must be a non-negative integer, not `{v}`"))),
        Err(_) => Ok(DEFAULT_DEPTH),
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let depth = depth(cli.depth)?;
    if cli.k == 0 {
        return Err(CliError::Usage("the model size must be at least 1".into()));
    }
    let budget = Budget::new(depth, cli.k);
    let mut ws = Workspace::new();
    match &cli.command {
        Command::Check { theory, file } => commands::check(&mut ws, theory, file),
        Command::Prove { theory, sequent } => commands::prove_cmd(&mut ws, theory, sequent, budget),
        Command::Free { theory, formula } => commands::free(&mut ws, theory, formula, depth),
        Command::Factor { theory, file, hom } => commands::factor(&mut ws, theory, file, hom.as_deref()),
        Command::Translate { morphism, input, check } => commands::translate(&mut ws, morphism, input.as_deref(), *check, budget),
        Command::Sketch2pht { file } => commands::sketch2pht(file),
        Command::Birkhoff { theory, pool, class, judgments } => commands::birkhoff(
            &mut ws,
            BirkhoffArgs {
                theory,
                pool: pool.as_deref(),
                class: class.as_deref(),
                judgments: judgments.as_deref(),
                size: cli.k,
                depth,
            },
        ),
        Command::Fmt { file, theory } => commands::fmt(&mut ws, file, theory.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 10,
            };
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(r) => {
            if json {
                report::emit(&r.json);
            } else {
                report::write_stdout(&r.text);
            }
            ExitCode::from(r.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if json {
                report::emit(&json!({ "error": e.to_string(), "kind": e.kind(), "status": "error" }));
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

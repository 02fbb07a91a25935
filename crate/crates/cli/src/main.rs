//! Command-line front end: diagram enumeration, group arithmetic over a
//! model's contraction operad, the renormalization-group action and batch
//! verification.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use operad_rg::Error;

mod commands;
mod config;

#[derive(Debug, Parser)]
#[command(name = "operad-rg", version, about = "Operadic renormalization group in exact arithmetic")]
struct Cli {
    /// JSON model file.
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    /// Truncation order m.
    #[arg(long, global = true, default_value_t = 3)]
    order: usize,
    /// Seed for every random sample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Bound on the number of enumerated diagrams.
    #[arg(long, global = true, default_value_t = operad_rg::contraction_operad::DEFAULT_CAP)]
    cap: usize,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the model's diagram classes with N vertices.
    Diagrams { n: usize },
    /// Group product g ∙ h.
    Compose { g: PathBuf, h: PathBuf },
    /// Group inverse.
    Invert { g: PathBuf },
    /// Exponential of a Lie element.
    Exp { l: PathBuf },
    /// Logarithm of a group element.
    Log { g: PathBuf },
    /// Image of an invariant group element as a formal diffeomorphism of coupling space.
    RgAction { g: PathBuf },
    /// Run one of the property suites on the model.
    Verify {
        which: Suite,
        /// Largest arity (or vertex count) examined.
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        /// Random samples per check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Axioms,
    Closure,
    Wick,
    Morphism,
}

/// Why a command stopped.
#[derive(Debug)]
enum Failure {
    Library(Error),
    Verification(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Verification(_) => 4,
            Failure::Library(e) => match e {
                Error::CapExceeded(_) => 2,
                Error::OrderMismatch(..)
                | Error::NotInvariant(_)
                | Error::NotPointed
                | Error::OutsideVertexTypes(_)
                | Error::ArityMismatch { .. }
                | Error::DimensionMismatch(..)
                | Error::SlotOutOfRange { .. } => 3,
                _ => 1,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Library(e) => write!(f, "{e}"),
            Failure::Verification(s) => write!(f, "verification failed: {s}"),
            Failure::Io(s) => write!(f, "{s}"),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let model_path = cli.model.as_deref().ok_or_else(|| Failure::Io("--model is required".into()))?;
    let model = config::load_model(model_path)?;
    let ctx = commands::Context::new(model, cli.order, cli.seed, cli.cap);
    let out = cli.out.as_deref();
    match cli.command {
        Command::Diagrams { n } => {
            let (text, count) = ctx.diagrams(n)?;
            emit(&text, out)?;
            eprintln!("{count} diagrams");
            Ok(())
        }
        Command::Compose { g, h } => emit(&ctx.compose(&g, &h)?, out),
        Command::Invert { g } => emit(&ctx.invert(&g)?, out),
        Command::Exp { l } => emit(&ctx.exp(&l)?, out),
        Command::Log { g } => emit(&ctx.log(&g)?, out),
        Command::RgAction { g } => emit(&ctx.rg_action(&g)?, out),
        Command::Verify { which, max_arity, samples } => {
            let report = match which {
                Suite::Axioms => ctx.verify_axioms(max_arity, samples),
                Suite::Closure => ctx.verify_closure(max_arity),
                Suite::Wick => ctx.verify_wick(max_arity),
                Suite::Morphism => ctx.verify_morphism(samples),
            }?;
            emit(&report, out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

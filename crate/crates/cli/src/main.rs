//! `quasicop` command-line front end.
//!
//! Exit codes: 0 positive verdict, 1 negative verdict (the report carries a
//! certificate), 2 input error, 3 a `--verify` re-check failed.

mod commands;
mod doc;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Verify(String),
}

impl From<quasicop::Error> for CliError {
    fn from(e: quasicop::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "quasicop", version, about = "Exact checks for discrete quasi-distributions and imprecise copulas")]
pub struct Cli {
    /// Re-check every witness and certificate through the library.
    #[arg(long, global = true)]
    pub verify: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify grids and pairs.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Build a distribution between two bounds.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Split a grid into copula and margins, or compose one.
    #[command(subcommand)]
    Sklar(SklarCommand),
    /// Restricted p-boxes.
    #[command(subcommand)]
    Pbox(PboxCommand),
    /// Families of distributions.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Reflect a grid along one axis.
    Reflect {
        grid: PathBuf,
        #[arg(long)]
        axis: AxisArg,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Pointwise infimum and supremum of grids with common margins.
    Envelope {
        #[arg(required = true)]
        grids: Vec<PathBuf>,
        #[arg(long)]
        save_lower: Option<PathBuf>,
        #[arg(long)]
        save_upper: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct CapArgs {
    /// Largest gaggle size searched.
    #[arg(long, default_value_t = 3)]
    pub max_rects: usize,
    /// Search every gaggle on the mesh.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// Conditions (A), (B), (C) of one grid.
    Dist { grid: PathBuf },
    /// Axioms IC1 to IC4 of a pair of quasi-copulas.
    Imprecise { lower: PathBuf, upper: PathBuf },
    /// Coherence of a pair with common margins.
    Coherence {
        lower: PathBuf,
        upper: PathBuf,
        #[command(flatten)]
        cap: CapArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Lp,
    Patch,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum AxisArg {
    X,
    Y,
}

#[derive(Subcommand, Debug)]
pub enum ConstructCommand {
    /// A distribution `F` with `A <= F <= B` and the margins of `A`.
    Sandwich {
        lower: PathBuf,
        upper: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Lp)]
        method: Method,
        #[arg(long)]
        save: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SklarCommand {
    /// Copula on the margin ranges and the two margins.
    Decompose {
        grid: PathBuf,
        #[arg(long)]
        save: Option<PathBuf>,
        #[arg(long)]
        save_fx: Option<PathBuf>,
        #[arg(long)]
        save_fy: Option<PathBuf>,
    },
    /// `C(F_X(x), F_Y(y))` on the margin mesh.
    Compose {
        copula: PathBuf,
        fx: PathBuf,
        fy: PathBuf,
        #[arg(long)]
        save: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PboxCommand {
    /// Compose a coherent copula pair with margins.
    Build {
        lower: PathBuf,
        upper: PathBuf,
        fx: PathBuf,
        fy: PathBuf,
        #[command(flatten)]
        cap: CapArgs,
        #[arg(long)]
        save_lower: Option<PathBuf>,
        #[arg(long)]
        save_upper: Option<PathBuf>,
    },
    /// Whether a grid is a distribution in the box.
    Member { lower: PathBuf, upper: PathBuf, grid: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum FamilyCommand {
    /// Group by margins and derive envelopes and imprecise copulas.
    Analyze {
        #[arg(required = true)]
        grids: Vec<PathBuf>,
        #[command(flatten)]
        cap: CapArgs,
    },
}

fn main() -> ExitCode {
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match commands::run(&cli, echo) {
        Ok(outcome) => {
            print!("{}", doc::canonical(&outcome.report));
            ExitCode::from(if outcome.positive { 0 } else { 1 })
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
    }
}

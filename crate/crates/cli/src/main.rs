mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::Overrides;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Refused(String),
}

impl From<torus_cwt::Error> for CliError {
    fn from(e: torus_cwt::Error) -> Self {
        use torus_cwt::Error as E;
        match e {
            E::BelowFloor { .. } | E::NonDiagonal => CliError::Refused(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "toruswt", version, about = "Continuous wavelet transform on the 2-torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Necessary condition, spectrum and frame bounds of a wavelet
    Admissibility(#[command(flatten)] Overrides),
    /// Wavelet coefficients of a signal file
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Reconstruct a signal from a coefficient file
    Synthesize {
        #[arg(long)]
        coefficients: PathBuf,
        /// Signal to compare the reconstruction against
        #[arg(long)]
        original: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gcd orbit and representative matrix of a Fourier index
    #[command(allow_negative_numbers = true)]
    Orbit { n1: i64, n2: i64 },
    /// Data for plots of dilations and modular images
    Plotdata(#[command(flatten)] Overrides),
    /// Random band-limited test signal
    RandomSignal(#[command(flatten)] Overrides),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Admissibility(o) => commands::admissibility(&o.resolve()?),
        Command::Analyze { input, opts } => commands::analyze_cmd(&input, &opts.resolve()?),
        Command::Synthesize { coefficients, original, out } => {
            commands::synthesize_cmd(&coefficients, original.as_deref(), out.as_deref())
        }
        Command::Orbit { n1, n2 } => commands::orbit(n1, n2),
        Command::Plotdata(o) => commands::plotdata(&o.resolve()?),
        Command::RandomSignal(o) => commands::random_signal(&o.resolve()?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Refused(_) => ExitCode::from(1),
                CliError::Usage(_) => ExitCode::from(2),
            }
        }
    }
}

//! Command-line front end: figure sweeps as CSV, seeded property
//! verification, and configured cascade experiments.

pub mod cascade;
mod error;
pub mod figure;
pub mod table;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, Result};
use figure::{FigureId, FigureOptions};

#[derive(Debug, Parser)]
#[command(name = "gauss-bs", version, about = "Gaussian states through beam splitters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the data behind one figure as CSV.
    Figure(FigureArgs),
    /// Run every property suite on seeded random cases.
    Verify(VerifyArgs),
    /// Run a depletion or splitting-tree experiment from a JSON config.
    Cascade(CascadeArgs),
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub id: FigureId,
    /// Minimum eigenvalue of the first (nonclassical) input.
    #[arg(long)]
    pub lambda1_min: Option<f64>,
    /// Minimum eigenvalue of the second pure input (fig6).
    #[arg(long)]
    pub lambda2_min: Option<f64>,
    /// Mean photon number of a thermal second input.
    #[arg(long)]
    pub n_thermal: Option<f64>,
    /// Purity of the first input.
    #[arg(long)]
    pub purity: Option<f64>,
    /// Sweep points.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub cases: u64,
    /// Largest acceptable residual.
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CascadeArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(x) => Err(format!("{x} is not a positive finite number")),
        Err(e) => Err(e.to_string()),
    }
}

/// Runs one command. `Ok(false)` means a property check failed.
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Figure(args) => {
            let opts = FigureOptions {
                lambda1_min: args.lambda1_min,
                lambda2_min: args.lambda2_min,
                n_thermal: args.n_thermal,
                purity: args.purity,
                points: args.points,
            };
            figure::figure(args.id, &opts)?.write_file(&args.out)?;
            Ok(true)
        }
        Command::Verify(args) => {
            let report = verify::verify(args.seed, args.cases as usize, args.tol)?;
            println!("{report}");
            Ok(report.passed())
        }
        Command::Cascade(args) => {
            let config = cascade::CascadeConfig::load(&args.config)?;
            let experiment =
                config.experiment().map_err(|message| CliError::Config { path: args.config.clone(), message })?;
            let output = cascade::run(&experiment)?;
            output.table.write_file(&args.out)?;
            if let Some(limit) = output.limit {
                println!("{limit}");
            }
            Ok(true)
        }
    }
}

//! `dtnbif`: spectral reports, branches, sweeps and probes from a TOML run file.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Context;
use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver error: {0}")]
    Solver(#[from] dtnbif_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("incomplete run ({} error(s)); partial results in {}", errors.len(), files.last().map(|f| f.display().to_string()).unwrap_or_default())]
    Incomplete { files: Vec<PathBuf>, errors: Vec<String> },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "dtnbif", version, about = "Branches of positive solutions for Laplace problems with indefinite nonlinear boundary conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Principal eigenvalue and σ₁ over a λ grid
    Eig(Common),
    /// Nehari minimizers at the configured λ values (CSV)
    Solve(Common),
    /// Continuation of the positive branch (CSV plus diagram)
    Branch(Common),
    /// δ-sweep over the family g⁺ - δ g⁻ (JSON)
    Sweep(Common),
    /// Exact enumeration of the two-node interval system (JSON)
    Oracle1d(Common),
    /// Log-log slope of the rescaled branch for small λ (JSON)
    Asympt(Common),
    /// Multi-start Newton search for positive solutions (JSON)
    Probe(Common),
}

#[derive(Args)]
struct Common {
    /// Run file (TOML, or a JSON report whose `config` member is reused)
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `run.out`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed (overrides `run.seed`)
    #[arg(long)]
    seed: Option<u64>,
    /// Progress messages on stderr
    #[arg(long)]
    verbose: bool,
}

fn run(command: Command) -> Result<Vec<PathBuf>, CliError> {
    let (common, f): (Common, fn(&Context) -> Result<Vec<PathBuf>, CliError>) = match command {
        Command::Eig(c) => (c, commands::eig),
        Command::Solve(c) => (c, commands::solve),
        Command::Branch(c) => (c, commands::branch),
        Command::Sweep(c) => (c, commands::sweep),
        Command::Oracle1d(c) => (c, commands::oracle1d),
        Command::Asympt(c) => (c, commands::asympt),
        Command::Probe(c) => (c, commands::probe),
    };
    let mut config = RunConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        config.run.seed = seed;
    }
    let out = common.out.unwrap_or_else(|| commands::default_out(&config));
    f(&Context { config, out, verbose: common.verbose })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Incomplete { files, errors } = &e {
                for f in files {
                    println!("wrote {}", f.display());
                }
                for msg in errors {
                    eprintln!("  {msg}");
                }
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

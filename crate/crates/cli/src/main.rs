mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::config::{Mode, RunConfig};

#[derive(Parser)]
#[command(name = "qproc", version, about = "Two-qubit process tomography and gate metrics for an ion-trap phase gate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transfer operators, E-grid and metrics of the ideal controlled-phase gate.
    Ideal(Common),
    /// Simulate the ion-trap pulse sequence and characterize it.
    Simulate(Common),
    /// Metrics over a grid of Rabi frequencies and Lamb-Dicke parameters.
    Sweep(Common),
    /// Metrics of transfer operators read from JSON.
    Metrics(Common),
    /// Generator of a process snapshot, with an optional Markovianity check.
    Liouvillian(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed; overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Shots per Pauli observable; overrides `shots`.
    #[arg(long)]
    shots: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    workers: Option<usize>,
}

impl Command {
    fn split(self) -> (Mode, Common) {
        match self {
            Command::Ideal(c) => (Mode::Ideal, c),
            Command::Simulate(c) => (Mode::Simulate, c),
            Command::Sweep(c) => (Mode::Sweep, c),
            Command::Metrics(c) => (Mode::Metrics, c),
            Command::Liouvillian(c) => (Mode::Liouvillian, c),
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let (mode, args) = cli.command.split();
    let mut config = RunConfig::load(&args.config)?;
    if let Some(out) = args.out {
        config.output_dir = out;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(shots) = args.shots {
        config.shots = shots;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.workers {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().context("starting worker pool")?;
    pool.install(|| commands::run(mode, &config))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

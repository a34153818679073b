//! `lcuprep`: batch front end for series approximation, circuit synthesis,
//! statevector simulation, shot sampling and shot analysis.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Ctx;
use crate::config::{ConfigError, Loaded};
use crate::output::OutDir;

#[derive(Parser)]
#[command(name = "lcuprep", version, about = "LCU state preparation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (default: config `outputs.dir`, else `out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Overrides `simulation.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Overrides `simulation.qubit_cap`.
    #[arg(long, global = true)]
    qubit_cap: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Series coefficients and a convergence table.
    Approx,
    /// Circuit JSON and resource counts.
    Synth,
    /// Post-selected amplitudes and a verification report.
    Simulate,
    /// Measurement counts from the post-selected state.
    Sample,
    /// KDE, moments and fidelity from a counts CSV.
    Analyze,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() || cause.is::<std::io::Error>() || cause.is::<csv::Error>() || cause.is::<serde_json::Error>() {
            return EXIT_CONFIG;
        }
        if let Some(e) = cause.downcast_ref::<lcu_prep::Error>() {
            return match e {
                lcu_prep::Error::InvalidArgument(_) | lcu_prep::Error::Json(_) => EXIT_CONFIG,
                lcu_prep::Error::ResourceLimit { .. } => EXIT_RESOURCE,
                lcu_prep::Error::NumericDomain(_) | lcu_prep::Error::DegeneratePostselection(_) => EXIT_NUMERIC,
            };
        }
    }
    EXIT_NUMERIC
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let path = cli.config.ok_or_else(|| ConfigError("--config is required".into()))?;
    let loaded = Loaded::from_path(&path)?;
    let dir = cli
        .out
        .or_else(|| loaded.config.outputs.dir.as_ref().map(|d| loaded.resolve(d)))
        .unwrap_or_else(|| PathBuf::from("out"));
    let ctx = Ctx {
        seed: cli.seed.unwrap_or(loaded.config.simulation.seed),
        qubit_cap: cli.qubit_cap,
        out: OutDir::create(&dir)?,
        loaded,
    };
    log::info!("config {} (sha256 {})", path.display(), ctx.loaded.hash);
    match cli.command {
        Command::Approx => commands::approx(&ctx),
        Command::Synth => commands::synth(&ctx),
        Command::Simulate => commands::simulate(&ctx),
        Command::Sample => commands::sample(&ctx),
        Command::Analyze => commands::analyze(&ctx),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use timeless_cli::run::{cmd_list_presets, cmd_run, cmd_sweep, Overrides};

/// Finite-dimensional simulator for universes with no external time:
/// constrained zero-energy states, relational clocks and the dynamics
/// recovered by conditioning on clock readings.
#[derive(Parser)]
#[command(name = "timeless", version, about)]
struct Cli {
    /// Output directory (beats TIMELESS_OUT and the config's out_dir)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cap on the total Hilbert-space dimension
    #[arg(long, global = true)]
    max_dim: Option<usize>,

    /// Seed for every pseudo-random choice in the run
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset once at its configured base parameters
    Run { config: PathBuf },
    /// Run every point of the config's sweep grid
    Sweep { config: PathBuf },
    /// List available presets
    ListPresets,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides { out: cli.out, max_dim: cli.max_dim, seed: cli.seed };
    let outcome = match &cli.command {
        Command::Run { config } => cmd_run(config, &overrides),
        Command::Sweep { config } => cmd_sweep(config, &overrides),
        Command::ListPresets => Ok(cmd_list_presets()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("{}", err.record());
            ExitCode::from(err.code as u8)
        }
    }
}

//! `qcontrol`: deterministic command-line laboratory for single-query
//! control of blackbox gates. Every command prints a JSON report to stdout
//! and exits 0 when all checks pass, 1 when any check fails, and 2 on
//! usage or configuration errors.

mod commands;
mod report;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "qcontrol",
    version,
    about = "Deterministic laboratory for single-query control of blackbox gates",
    propagate_version = true
)]
struct Cli {
    /// Master seed; falls back to QCONTROL_SEED, then 42.
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,

    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Runs the construction verification suite and reports each residual.
    Verify {
        /// Working dimension of the blackbox gates (2 through 8).
        #[arg(long, default_value_t = 2, value_name = "D")]
        target_dim: usize,

        /// Overrides every check threshold with one value.
        #[arg(long, value_name = "EPS")]
        tolerance: Option<f64>,
    },

    /// Landscape searches around the single-query control obstruction.
    #[command(subcommand)]
    Nogo(NogoCommand),

    /// Phase-covariance versus distinguishability sweep, tabulated as CSV.
    PhaseDemo {
        /// Number of evenly spaced phases on [0, 2π).
        #[arg(long, default_value_t = 32, value_name = "N")]
        points: usize,

        /// Comma-separated explicit phases (overrides --points).
        #[arg(long, value_name = "LIST")]
        phis: Option<String>,

        /// Destination for the CSV table.
        #[arg(long, value_name = "PATH")]
        csv: PathBuf,
    },
}

#[derive(Subcommand)]
enum NogoCommand {
    /// Minimizes the residual of the control equation over its landscape.
    Residual {
        /// Ancilla dimension of the vector-form landscape.
        #[arg(long, default_value_t = 1, value_name = "A")]
        ancilla_dim: usize,

        /// Minimize the landscape projected onto the control-0 input.
        #[arg(long)]
        projected: bool,

        /// Modulus cap on both projected coefficients (needs --projected).
        #[arg(long, requires = "projected", value_name = "C")]
        cap: Option<f64>,

        /// Independent seeded restarts.
        #[arg(long, default_value_t = 64, value_name = "N")]
        restarts: usize,

        /// Iteration budget per restart.
        #[arg(long, default_value_t = 2000, value_name = "N")]
        max_iters: usize,

        /// Writes 1-D landscape slices through the argmin as CSV.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },

    /// Searches for the circuit with the best worst-case fidelity on a set.
    Search {
        /// Gate set: xzh, haar:<n>, diagonal[:<n>], or singleton:<name>.
        #[arg(long, value_name = "PRESET")]
        gates: String,

        /// Ancilla dimension of the search circuits.
        #[arg(long, default_value_t = 1, value_name = "A")]
        ancilla_dim: usize,

        /// Dimension the gate set acts on.
        #[arg(long, default_value_t = 2, value_name = "D")]
        target_dim: usize,

        /// Independent seeded restarts.
        #[arg(long, default_value_t = 64, value_name = "N")]
        restarts: usize,

        /// Iteration budget per restart.
        #[arg(long, default_value_t = 2000, value_name = "N")]
        max_iters: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let seed = resolve_seed(cli.seed)?;
    let started = Instant::now();
    let mut report = match &cli.command {
        Command::Verify {
            target_dim,
            tolerance,
        } => commands::cmd_verify(seed, *target_dim, *tolerance)?,
        Command::Nogo(NogoCommand::Residual {
            ancilla_dim,
            projected,
            cap,
            restarts,
            max_iters,
            csv,
        }) => commands::cmd_nogo_residual(
            seed,
            &commands::ResidualArgs {
                ancilla_dim: *ancilla_dim,
                projected: *projected,
                cap: *cap,
                restarts: *restarts,
                max_iters: *max_iters,
                csv: csv.clone(),
            },
        )?,
        Command::Nogo(NogoCommand::Search {
            gates,
            ancilla_dim,
            target_dim,
            restarts,
            max_iters,
        }) => commands::cmd_nogo_search(
            seed,
            &commands::SearchArgs {
                gates: gates.clone(),
                ancilla_dim: *ancilla_dim,
                target_dim: *target_dim,
                restarts: *restarts,
                max_iters: *max_iters,
            },
        )?,
        Command::PhaseDemo { points, phis, csv } => {
            commands::cmd_phase_demo(seed, *points, phis.as_deref(), csv)?
        }
    };
    report.wall_time_s = started.elapsed().as_secs_f64();

    let json = report.to_json();
    if let Some(path) = &cli.output {
        std::fs::write(path, json.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    println!("{json}");
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Seed resolution order: --seed flag, then QCONTROL_SEED, then 42.
fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("QCONTROL_SEED") {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map_err(|_| format!("QCONTROL_SEED must be an unsigned 64-bit integer, got {raw:?}")),
        Err(std::env::VarError::NotPresent) => Ok(42),
        Err(e) => Err(format!("QCONTROL_SEED is unreadable: {e}")),
    }
}

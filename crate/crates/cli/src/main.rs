//! `gapflow` — sweeps, probes and simulations for the thin-gap toolkit.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 usage or validation
//! error. Identical configuration and seed produce byte-identical output
//! files; every output embeds its effective configuration, and feeding
//! that file back through `--config` reproduces the run.

mod commands;
mod config;
mod report;

use clap::{Parser, Subcommand};
use std::fmt;
use std::process::ExitCode;

/// Marker for errors that should exit with the usage code.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(
    name = "gapflow",
    version,
    about = "Thin-gap drag asymptotics, contact dynamics and BMO seminorms"
)]
struct Cli {
    /// Worker threads for sweep evaluation (default: available parallelism)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate and classify the model integral int |x1|^p / gamma_h^q
    Lemma10(commands::Lemma10Args),
    /// Check the gap velocity field against its finite-difference oracles
    FieldProbe(commands::FieldProbeArgs),
    /// Sweep the weighted L2 functionals of the gap field over h
    SweepNorms(commands::SweepNormsArgs),
    /// Sweep the drag coefficient, its pairing and the lubrication oracle
    DragTable(commands::DragTableArgs),
    /// Integrate the quasi-static fall and classify contact
    Fall(commands::FallArgs),
    /// BMO seminorms and inequality ratios for the analytic catalog
    BmoCheck(commands::BmoCheckArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Lemma10(args) => commands::cmd_lemma10(args),
        Command::FieldProbe(args) => commands::cmd_field_probe(args),
        Command::SweepNorms(args) => commands::cmd_sweep_norms(args),
        Command::DragTable(args) => commands::cmd_drag_table(args),
        Command::Fall(args) => commands::cmd_fall(args),
        Command::BmoCheck(args) => commands::cmd_bmo_check(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some()
                || matches!(
                    e.downcast_ref::<gapflow::Error>(),
                    Some(gapflow::Error::Domain(_))
                )
            {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

//! `tuberscope`: simulate, analyze, validate and budget subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod analyze;
mod budget;
mod output;
mod simulate;
mod validate;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "tuberscope", version, about = "Storage-root size and weight estimation from 2D silhouettes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo projection experiment over meshes or synthetic ellipsoids.
    Simulate(simulate::Args),
    /// Per-root metrics from VIA polygon annotations.
    Analyze(analyze::Args),
    /// Compare observations against sorter records.
    Validate(validate::Args),
    /// Combine an error budget.
    Budget(budget::Args),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Mode {
    Free,
    Plane,
    Rollers,
}

/// Outcome of a subcommand that may partially succeed.
pub enum Status {
    Ok,
    /// Some inputs failed; everything else was written.
    Partial(usize),
}

/// Errors raised before any work starts.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn init_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var("TUBERSCOPE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| ConfigError(format!("TUBERSCOPE_THREADS must be a non-negative integer, got {raw:?}")))?;
    // 0 keeps rayon's default (one per core)
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| ConfigError(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Simulate(a) => simulate::run(a),
        Command::Analyze(a) => analyze::run(a),
        Command::Validate(a) => validate::run(a),
        Command::Budget(a) => budget::run(a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Partial(n)) => {
            eprintln!("error: {n} input(s) failed; remaining outputs were written");
            ExitCode::from(1)
        }
        Err(e) if e.is::<ConfigError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

//! `pb`: balance diagnostics for partition models and an entity-resolution
//! experiment runner.
//!
//! Every command reads its parameters from an optional JSON file given by
//! `--config`, lets flags override them, rejects unknown keys, and writes a
//! `manifest.json` next to its outputs. Exit status is 0 on success, 2 for bad
//! configuration or out-of-domain input, 3 for a loss of numerical precision
//! and 1 for anything else.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod analysis;
mod config;
mod er;
mod model;

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pb", version, about = "Balancedness of random partitions and ESC entity resolution")]
struct Cli {
    /// JSON object of parameters; flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory for outputs and manifest.json.
    #[arg(long, global = true, default_value = ".", value_name = "DIR")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// EPPF of every integer partition of n (spectrum.csv).
    Spectrum(analysis::SpectrumArgs),
    /// B-sequence of the model's W (bseq.csv) and its balance class.
    Bseq(analysis::BseqArgs),
    /// Balance class from log-convexity of W (classify.json).
    Classify(analysis::ClassifyArgs),
    /// Relative log-concavity order of two W sequences (compare_lc.json).
    CompareLc(analysis::CompareArgs),
    /// Checks the addition rule up to n_max (projectivity.json).
    Projectivity(analysis::ProjectivityArgs),
    /// Entity resolution: simulate data, fit an ESC prior, evaluate estimates.
    #[command(subcommand)]
    Er(ErCommand),
}

#[derive(Subcommand)]
enum ErCommand {
    /// Synthetic records from a cluster-size scenario (dataset.csv).
    Simulate(er::SimulateArgs),
    /// MCMC fit (trace.csv, summary.json, point_estimate.csv).
    Fit(er::FitArgs),
    /// FNR and FDR of an estimate against the truth (report.json).
    Eval(er::EvalArgs),
}

/// A failed run: message and exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn other(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::other(format!("{}: {e}", path.display()))
    }
}

impl From<partition_balance::Error> for Failure {
    fn from(e: partition_balance::Error) -> Self {
        use partition_balance::Error as E;
        let code = match e {
            E::Config(_) | E::Domain(_) | E::Guard { .. } => 2,
            E::Precision(_) => 3,
            E::Degenerate(_) | E::Sampler(_) => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = cli.config.as_deref();
    let out = cli.out.as_path();
    match cli.command {
        Command::Spectrum(a) => analysis::spectrum(cfg, out, &a),
        Command::Bseq(a) => analysis::bseq(cfg, out, &a),
        Command::Classify(a) => analysis::classify(cfg, out, &a),
        Command::CompareLc(a) => analysis::compare_lc(cfg, out, &a),
        Command::Projectivity(a) => analysis::projectivity(cfg, out, &a),
        Command::Er(ErCommand::Simulate(a)) => er::simulate(cfg, out, &a),
        Command::Er(ErCommand::Fit(a)) => er::fit(cfg, out, &a),
        Command::Er(ErCommand::Eval(a)) => er::eval(cfg, out, &a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pb: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

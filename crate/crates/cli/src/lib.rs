//! Command-line front end: batch enhancement, parameter sweeps and metrics.
//!
//! Exit codes: 0 on success, 1 when some inputs failed (the rest are still
//! written), 2 for configuration errors detected before any processing.

pub mod args;
mod commands;
pub mod config;
mod files;

use std::process::ExitCode;

use anyhow::{bail, Result};

pub use args::Cli;
pub use commands::{dump_name, output_name};

use args::Command;
use config::{EnhanceFlags, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// At least one input failed.
    Partial,
}

pub fn run(cli: Cli) -> ExitCode {
    match dispatch(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Enhance(a) => {
            let flags = EnhanceFlags {
                denoise: a.denoise,
                denoiser_cmd: a.denoiser_cmd.clone(),
                dump: a.dump,
            };
            let cfg = RunConfig::resolve(&a.params, &a.grid, &flags)?;
            with_threads(cli.threads.or(cfg.threads), || {
                commands::enhance(&a.inputs, &cfg, a.reference.as_deref(), a.sweep)
            })
        }
        Command::Sweep(a) => {
            let cfg = RunConfig::resolve(&a.params, &a.grid, &EnhanceFlags::default())?;
            with_threads(cli.threads.or(cfg.threads), || commands::sweep(&a.input, &cfg))
        }
        Command::Metrics(a) => with_threads(cli.threads, || {
            commands::metrics(&a.enhanced, &a.reference, a.input.as_deref(), a.csv.as_deref())
        }),
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        None => f(),
        Some(0) => bail!("thread count must be at least 1"),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(f),
    }
}

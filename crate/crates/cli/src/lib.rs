//! Library half of the `radium-lab` binary: argument definitions, dispatch
//! and result writing. Kept separate so integration tests can drive it
//! without spawning processes.

pub mod args;
pub mod output;
pub mod run;

use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};

pub use args::{Cli, Command, Format};
pub use output::{format_sig, write_results, Manifest, Table};
pub use run::{execute, Report};

/// Environment variable fixing the worker thread count.
pub const THREADS_ENV: &str = "RADIUM_LAB_THREADS";

/// Resolves `replay` to the recorded command, with an optional new output path.
pub fn resolve(command: Command) -> Result<Command> {
    let Command::Replay(r) = command else {
        return Ok(command);
    };
    let manifest = Manifest::load(&r.manifest)?;
    let mut cmd = manifest.config;
    if let Some(out) = cmd.output_mut() {
        out.out = Some(r.out.unwrap_or(manifest.output));
        out.format = manifest.format;
    }
    Ok(cmd)
}

/// Runs a validated command and writes its results. Returns the summary line.
pub fn run_command(command: &Command) -> Result<String> {
    let report = execute(command)?;
    let output = command.output().context("command has no output settings")?;
    match &output.out {
        Some(path) => {
            write_results(&report.table, command, path, output.format)?;
            Ok(format!("{} -> {}", report.summary, path.display()))
        }
        None => {
            let bytes = report.table.render(output.format)?;
            std::io::stdout().lock().write_all(&bytes)?;
            Ok(report.summary)
        }
    }
}

/// Worker count requested through [`THREADS_ENV`], if any.
pub fn requested_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{THREADS_ENV} must be a positive integer, got {v:?}"))?;
            anyhow::ensure!(n > 0, "{THREADS_ENV} must be a positive integer, got 0");
            Ok(Some(n))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(e).context(THREADS_ENV),
    }
}

/// Path of the manifest written beside `out`.
pub fn manifest_path(out: &std::path::Path) -> PathBuf {
    output::manifest_path(out)
}

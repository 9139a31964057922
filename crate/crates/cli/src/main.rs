//! `orbsurf`: command-line front end for exact surface and orbifold computations.
//!
//! Exit status is 0 on success, 2 when a certificate fails, 1 on usage errors.

mod args;
mod commands;
mod config;
mod manifest;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Merge};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] orbsurf_core::Error),
}

/// Rendered output and whether the certificate it carries holds.
pub struct Outcome {
    pub text: String,
    pub certified: bool,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("ORBSURF_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "ORBSURF_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}

fn with_config<T>(mut args: T, cli_config: Option<&std::path::Path>) -> Result<T, CliError>
where
    T: Merge + serde::Serialize + serde::de::DeserializeOwned + Default,
{
    config::apply(&mut args, cli_config)?;
    Ok(args)
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    configure_threads()?;
    let cfg = cli.config.as_deref();
    match cli.command {
        Command::Cover(a) => commands::cover(&with_config(a, cfg)?),
        Command::P1p2(a) => commands::p1p2(&with_config(a, cfg)?),
        Command::BtSearch(a) => commands::bt_search(&with_config(a, cfg)?),
        Command::Bound(a) => commands::bound(&with_config(a, cfg)?),
        Command::Tangency(a) => commands::tangency(&with_config(a, cfg)?),
        Command::Verify(a) => verify::run(&with_config(a, cfg)?),
    }
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which is reserved here for
    // failed certificates.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::from(if out.certified { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

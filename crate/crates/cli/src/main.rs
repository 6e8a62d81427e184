//! `etwist`: command line front end for the identity registry, the model
//! spectra, the Frölicher pages and the hypothesis checkers.

mod cache;
mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cache::Cache;
use commands::Ctx;
use config::ConfigFile;
use output::{Formats, Sink};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Parser, Debug)]
#[command(name = "etwist", version, about = "Exact checks for twisted Hermitian operator identities and nilmanifold spectra")]
struct Cli {
    /// TOML configuration file; command line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma separated subset of json,text,csv.
    #[arg(long, global = true, value_delimiter = ',')]
    format: Vec<String>,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Suppress stdout and progress output; files are still written.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check catalogued operator identities by exact jet evaluation.
    Verify(commands::verify::VerifyArgs),
    /// Sweep h and compare small-eigenvalue decay with the Frölicher pages.
    Spectrum(commands::spectrum::SpectrumArgs),
    /// Frölicher spectral sequence pages of an invariant model.
    Fss(commands::fss::FssArgs),
    /// Evaluate the geometric hypotheses on a sampled ball or a model.
    Hypotheses(commands::hypotheses::HypothesesArgs),
    /// Collect earlier JSON reports into one summary.
    Report(commands::report::ReportArgs),
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let file = ConfigFile::load(cli.config.as_deref())?;
    let formats = if !cli.format.is_empty() {
        Formats::parse(&cli.format)?
    } else if let Some(f) = &file.formats {
        Formats::parse(f)?
    } else {
        Formats::all()
    };
    let out_dir = cli.out.clone().or_else(|| file.out_dir.clone()).unwrap_or_else(|| PathBuf::from("etwist-out"));
    let cache_sec = file.cache.as_ref();
    let enabled = !cli.no_cache && cache_sec.and_then(|c| c.enabled).unwrap_or(true);
    let cache_dir = cli.cache_dir.clone().or_else(|| cache_sec.and_then(|c| c.dir.clone())).unwrap_or_else(|| PathBuf::from(".etwist-cache"));
    let ctx = Ctx { file, sink: Sink { out_dir, formats, quiet: cli.quiet }, cache: Cache::new(enabled.then_some(cache_dir)) };
    match &cli.command {
        Command::Verify(a) => commands::verify::run(a, &ctx),
        Command::Spectrum(a) => commands::spectrum::run(a, &ctx),
        Command::Fss(a) => commands::fss::run(a, &ctx),
        Command::Hypotheses(a) => commands::hypotheses::run(a, &ctx),
        Command::Report(a) => commands::report::run(a, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(move || run(cli)) {
        Ok(Ok(true)) => ExitCode::SUCCESS,
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(e @ CliError::Config(_))) => {
            eprintln!("etwist: {e}");
            ExitCode::from(2)
        }
        Ok(Err(e @ CliError::Internal(_))) => {
            eprintln!("etwist: {e}");
            ExitCode::from(3)
        }
        Err(_) => {
            eprintln!("etwist: internal error (panic)");
            ExitCode::from(3)
        }
    }
}

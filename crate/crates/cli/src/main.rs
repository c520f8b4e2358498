mod args;
mod diagnose;
mod eval;
mod output;
mod score;

use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use mmiqa::config::{dump_config, load_config};
use mmiqa::distort::{build_corpus, LevelOverrides, MANIFEST_FILE};
use mmiqa::score::FusionConfig;

use args::{Cli, Command, Format};

/// Bad flags, bad calibration, or nothing to do. Exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub anyhow::Error);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(e: impl Into<anyhow::Error>) -> anyhow::Error {
    UsageError(e.into()).into()
}

/// Errors in user-supplied settings rather than in the data.
fn is_usage(e: &mmiqa::Error) -> bool {
    matches!(
        e,
        mmiqa::Error::BadConfig(_) | mmiqa::Error::InvalidWeights { .. } | mmiqa::Error::BadLevel { .. }
    )
}

pub enum Outcome {
    Complete,
    Partial,
}

fn fusion_config(cli: &Cli) -> anyhow::Result<FusionConfig> {
    match &cli.config {
        Some(path) => load_config(path)
            .with_context(|| format!("loading {}", path.display()))
            .map_err(usage),
        None => Ok(FusionConfig::default()),
    }
}

fn workers(cli: &Cli) -> anyhow::Result<usize> {
    match cli.workers {
        Some(0) => Err(usage(anyhow::anyhow!("--workers must be at least 1"))),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let cfg = fusion_config(&cli)?;
    let workers = workers(&cli)?;
    match &cli.command {
        Command::Score { inputs, resize, timing } => {
            let opts = score::Options {
                resize: *resize,
                timing: *timing,
                workers,
            };
            score::run(inputs, &cfg, &opts, cli.format, cli.out.as_deref())
        }
        Command::Distort {
            clean_dir,
            out_dir,
            seed,
            strict_levels,
            levels,
        } => {
            let overrides: LevelOverrides = levels.iter().copied().collect();
            build_corpus(clean_dir, out_dir, *seed, *strict_levels, &overrides).map_err(|e| {
                if is_usage(&e) {
                    usage(e)
                } else {
                    anyhow::Error::new(e).context(format!("building corpus from {}", clean_dir.display()))
                }
            })?;
            println!("{}", out_dir.join(MANIFEST_FILE).display());
            Ok(Outcome::Complete)
        }
        Command::Eval {
            predictions,
            bootstrap,
            seed,
            holdout,
        } => {
            eval::run(predictions, *bootstrap, *seed, *holdout, cli.format, cli.out.as_deref())?;
            Ok(Outcome::Complete)
        }
        Command::Diagnose { manifest, delta_mode } => {
            diagnose::run(manifest, &cfg, *delta_mode, workers, cli.format, cli.out.as_deref())?;
            Ok(Outcome::Complete)
        }
        Command::ConfigDump => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&cfg)? + "\n",
                Format::Csv => dump_config(&cfg),
            };
            output::write_text(cli.out.as_deref(), &text)?;
            Ok(Outcome::Complete)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Complete) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(1),
        Err(e) => {
            let code = if e.is::<UsageError>() || e.downcast_ref::<mmiqa::Error>().is_some_and(is_usage) {
                2
            } else {
                1
            };
            eprintln!("mmiqa: {e:#}");
            ExitCode::from(code)
        }
    }
}

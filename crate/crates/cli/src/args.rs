use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use mmiqa::distort::Family;
use mmiqa::eval::{DeltaMode, DEFAULT_HOLDOUT_FRACTION};

#[derive(Debug, Parser)]
#[command(name = "mmiqa", version, about = "No-reference image quality scoring from interpretable cues")]
pub struct Cli {
    /// Key-value calibration file; unspecified keys keep their defaults.
    #[arg(long, global = true, env = "MMIQA_CONFIG", value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file (stdout when omitted).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score images; directories are expanded to the images they contain.
    Score {
        #[arg(required = true, value_name = "INPUT")]
        inputs: Vec<PathBuf>,
        /// Resize every image before scoring.
        #[arg(long, value_name = "WxH", value_parser = parse_size)]
        resize: Option<(usize, usize)>,
        /// Add per-image wall time as `elapsed_ms`.
        #[arg(long)]
        timing: bool,
    },
    /// Build a distorted corpus with one view per family for each clean image.
    Distort {
        clean_dir: PathBuf,
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict levels to the canonical severity grid.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set, value_name = "BOOL")]
        strict_levels: bool,
        /// Fix one family's severity instead of drawing it.
        #[arg(long = "level", value_name = "FAMILY=LEVEL", value_parser = parse_level)]
        levels: Vec<(Family, f64)>,
    },
    /// Correlate predictions with subjective scores (`id,predicted,mos`).
    Eval {
        predictions: PathBuf,
        #[arg(long, default_value_t = 100, value_name = "N")]
        bootstrap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fraction of records used to fit the logistic mapping.
        #[arg(long, default_value_t = DEFAULT_HOLDOUT_FRACTION)]
        holdout: f64,
    },
    /// Classify each manifest entry by its cue deltas and report metrics.
    Diagnose {
        manifest: PathBuf,
        #[arg(long, default_value_t = DeltaMode::Literal, value_name = "literal|argmax")]
        delta_mode: DeltaMode,
    },
    /// Print the effective configuration.
    ConfigDump,
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got `{s}`"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 3)
            .ok_or_else(|| format!("`{v}` is not a side length of at least 3"))
    };
    Ok((parse(w)?, parse(h)?))
}

fn parse_level(s: &str) -> Result<(Family, f64), String> {
    let (f, l) = s
        .split_once('=')
        .ok_or_else(|| format!("expected FAMILY=LEVEL, got `{s}`"))?;
    let family: Family = f.trim().parse().map_err(|e: mmiqa::Error| e.to_string())?;
    let level: f64 = l.trim().parse().map_err(|_| format!("`{l}` is not a number"))?;
    Ok((family, level))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_levels_parse() {
        assert_eq!(parse_size("1024x768"), Ok((1024, 768)));
        assert!(parse_size("1024").is_err());
        assert!(parse_size("2x9").is_err());
        assert_eq!(parse_level("blur=3"), Ok((Family::Blur, 3.0)));
        assert!(parse_level("sharpen=1").is_err());
    }

    #[test]
    fn global_flags_follow_the_subcommand() {
        let cli = Cli::try_parse_from(["mmiqa", "score", "a.png", "--workers", "2", "--format", "json"]).unwrap();
        assert_eq!(cli.workers, Some(2));
        assert_eq!(cli.format, Format::Json);
        let cli = Cli::try_parse_from(["mmiqa", "distort", "in", "out", "--strict-levels", "false"]).unwrap();
        assert!(matches!(cli.command, Command::Distort { strict_levels: false, .. }));
    }
}

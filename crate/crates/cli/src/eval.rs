use std::path::Path;

use anyhow::{anyhow, bail, Context};
use mmiqa::eval::{bootstrap_ci_with, PredictionRecord, ReportRow};

use crate::args::Format;
use crate::{output, usage};

const COLUMNS: [&str; 3] = ["id", "predicted", "mos"];

/// Reads `id,predicted,mos` records; other columns are ignored.
pub fn read_predictions(path: &Path) -> anyhow::Result<Vec<PredictionRecord>> {
    let mut reader =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let headers = reader.headers()?.clone();
    let mut index = [0usize; 3];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| anyhow!("{}: line 1: missing column `{name}`", path.display()))?;
    }

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.with_context(|| format!("reading {}", path.display()))?;
        let line = row.position().map_or(0, |p| p.line());
        let number = |i: usize| -> anyhow::Result<f64> {
            let raw = row.get(index[i]).unwrap_or("").trim();
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => bail!("{}: line {line}: column `{}`: `{raw}` is not a finite number", path.display(), COLUMNS[i]),
            }
        };
        let id = row.get(index[0]).unwrap_or("").trim();
        if id.is_empty() {
            bail!("{}: line {line}: empty `id`", path.display());
        }
        records.push(PredictionRecord::new(id, number(1)?, number(2)?));
    }
    Ok(records)
}

pub fn run(
    predictions: &Path,
    n_bootstrap: usize,
    seed: u64,
    holdout: f64,
    format: Format,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    if n_bootstrap == 0 {
        return Err(usage(anyhow!("--bootstrap must be at least 1")));
    }
    let records = read_predictions(predictions)?;
    if records.len() < 10 {
        bail!("{}: need at least 10 records, found {}", predictions.display(), records.len());
    }
    let report = bootstrap_ci_with(&records, n_bootstrap, seed, holdout)?;
    match format {
        Format::Csv => output::write_csv(out, &[ReportRow::from(&report)])?,
        Format::Json => output::write_json(out, &report)?,
    }
    if out.is_some() {
        println!(
            "SRCC {:.4} [{:.4}, {:.4}]  PLCC {:.4} [{:.4}, {:.4}]  n={}",
            report.srcc,
            report.srcc_ci95.0,
            report.srcc_ci95.1,
            report.plcc,
            report.plcc_ci95.0,
            report.plcc_ci95.1,
            report.n
        );
    }
    Ok(())
}

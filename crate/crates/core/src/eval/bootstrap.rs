use rand::Rng;
use serde::{Deserialize, Serialize};

use super::logistic::{check_holdout, fit_logistic5, DEFAULT_HOLDOUT_FRACTION};
use super::{check_finite, plcc, srcc, PredictionRecord};
use crate::{rng, Error, Result};

/// Bootstrap summary: point estimates are resample means, intervals are
/// the 2.5th and 97.5th percentiles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub srcc: f64,
    pub plcc: f64,
    pub srcc_ci95: (f64, f64),
    pub plcc_ci95: (f64, f64),
    pub n: usize,
    pub n_bootstrap: usize,
    pub seed: u64,
    /// Resamples dropped because a correlation was undefined on them.
    pub n_degenerate: usize,
}

/// Flat form of [`CorrelationReport`] for CSV and JSON output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub srcc: f64,
    pub plcc: f64,
    pub srcc_lo: f64,
    pub srcc_hi: f64,
    pub plcc_lo: f64,
    pub plcc_hi: f64,
    pub n: usize,
    pub n_bootstrap: usize,
    pub seed: u64,
}

impl From<&CorrelationReport> for ReportRow {
    fn from(r: &CorrelationReport) -> Self {
        Self {
            srcc: r.srcc,
            plcc: r.plcc,
            srcc_lo: r.srcc_ci95.0,
            srcc_hi: r.srcc_ci95.1,
            plcc_lo: r.plcc_ci95.0,
            plcc_hi: r.plcc_ci95.1,
            n: r.n,
            n_bootstrap: r.n_bootstrap,
            seed: r.seed,
        }
    }
}

/// Percentile `p` in `[0, 100]` of `sorted` with linear interpolation
/// between closest ranks.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of empty sample");
    let pos = (p / 100.0).clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

fn resample_once(
    records: &[PredictionRecord],
    seed: u64,
    iteration: usize,
    holdout: f64,
) -> Option<(f64, f64)> {
    let mut r = rng::stream(seed, &[iteration as u64]);
    let n = records.len();
    let sample: Vec<PredictionRecord> = (0..n)
        .map(|_| records[r.random_range(0..n)].clone())
        .collect();
    let s = srcc(&sample).ok()?;
    let fit = fit_logistic5(&sample, holdout).ok()?;
    let p = plcc(&sample, &fit.params).ok()?;
    Some((s, p))
}

fn summarize(mut v: Vec<f64>) -> (f64, (f64, f64)) {
    v.sort_by(f64::total_cmp);
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    (mean, (percentile(&v, 2.5), percentile(&v, 97.5)))
}

pub fn bootstrap_ci(records: &[PredictionRecord], n_iter: usize, seed: u64) -> Result<CorrelationReport> {
    bootstrap_ci_with(records, n_iter, seed, DEFAULT_HOLDOUT_FRACTION)
}

/// Resamples `records` with replacement `n_iter` times, refitting the
/// logistic mapping on each resample.
///
/// Iteration `i` draws from its own stream derived from `(seed, i)`, so the
/// report is identical however the iterations are scheduled. Resamples on
/// which SRCC or PLCC is undefined are skipped; more than half skipped is
/// an error.
pub fn bootstrap_ci_with(
    records: &[PredictionRecord],
    n_iter: usize,
    seed: u64,
    holdout_fraction: f64,
) -> Result<CorrelationReport> {
    if records.len() < 10 {
        return Err(Error::DegenerateInput("bootstrap needs at least 10 records"));
    }
    if n_iter == 0 {
        return Err(Error::BadConfig("bootstrap iterations must be positive".into()));
    }
    check_finite(records)?;
    check_holdout(holdout_fraction)?;

    let run = |i: usize| resample_once(records, seed, i, holdout_fraction);
    #[cfg(feature = "parallel")]
    let outcomes: Vec<Option<(f64, f64)>> = {
        use rayon::prelude::*;
        (0..n_iter).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<Option<(f64, f64)>> = (0..n_iter).map(run).collect();

    let (s, p): (Vec<f64>, Vec<f64>) = outcomes.iter().flatten().copied().unzip();
    let degenerate = n_iter - s.len();
    if 2 * degenerate > n_iter {
        return Err(Error::DegenerateResamples {
            degenerate,
            total: n_iter,
        });
    }
    let (srcc_mean, srcc_ci95) = summarize(s);
    let (plcc_mean, plcc_ci95) = summarize(p);
    Ok(CorrelationReport {
        srcc: srcc_mean,
        plcc: plcc_mean,
        srcc_ci95,
        plcc_ci95,
        n: records.len(),
        n_bootstrap: n_iter,
        seed,
        n_degenerate: degenerate,
    })
}

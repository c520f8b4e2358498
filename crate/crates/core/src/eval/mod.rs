//! Agreement between predicted scores and human opinion scores, and the
//! cue-direction diagnostic for paired synthetic corpora.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

mod bootstrap;
mod diagnostic;
mod logistic;
mod simplex;

pub use bootstrap::{bootstrap_ci, bootstrap_ci_with, percentile, CorrelationReport, ReportRow};
pub use diagnostic::{
    classification_metrics, delta_diagnostic, family_cue, predict_family, ClassCounts,
    ClassMetrics, ClassificationMetrics, ConfusionTable, DeltaMode, OTHER_LABEL,
};
pub use logistic::{fit_logistic5, LogisticFit, LogisticParams, DEFAULT_HOLDOUT_FRACTION};
pub use simplex::{nelder_mead, SimplexResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub predicted: f64,
    pub mos: f64,
}

impl PredictionRecord {
    pub fn new(id: impl Into<String>, predicted: f64, mos: f64) -> Self {
        Self {
            id: id.into(),
            predicted,
            mos,
        }
    }
}

fn check_finite(records: &[PredictionRecord]) -> Result<()> {
    if records
        .iter()
        .any(|r| !r.predicted.is_finite() || !r.mos.is_finite())
    {
        return Err(Error::DegenerateInput("non-finite prediction or score"));
    }
    Ok(())
}

/// 1-based ranks with ties assigned their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // Positions i..j (0-based) share rank mean(i+1 ..= j).
        let rank = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        i = j;
    }
    ranks
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    assert_eq!(x.len(), y.len(), "pearson inputs differ in length");
    if x.len() < 2 {
        return Err(Error::DegenerateInput("need at least two samples"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateInput("constant variable"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman correlation as the Pearson correlation of average ranks.
pub fn srcc(records: &[PredictionRecord]) -> Result<f64> {
    check_finite(records)?;
    let (pred, mos): (Vec<f64>, Vec<f64>) = records.iter().map(|r| (r.predicted, r.mos)).unzip();
    pearson(&average_ranks(&pred), &average_ranks(&mos))
}

/// Spearman correlation via `1 - 6 Σ d² / (n (n² - 1))`.
///
/// Exact only for tie-free data; [`srcc`] is the general form.
pub fn srcc_rank_difference(records: &[PredictionRecord]) -> Result<f64> {
    check_finite(records)?;
    if records.len() < 2 {
        return Err(Error::DegenerateInput("need at least two samples"));
    }
    let (pred, mos): (Vec<f64>, Vec<f64>) = records.iter().map(|r| (r.predicted, r.mos)).unzip();
    let d2: f64 = average_ranks(&pred)
        .iter()
        .zip(average_ranks(&mos))
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let n = records.len() as f64;
    Ok(1.0 - 6.0 * d2 / (n * (n * n - 1.0)))
}

/// Pearson correlation between `params`-mapped predictions and scores.
pub fn plcc(records: &[PredictionRecord], params: &LogisticParams) -> Result<f64> {
    check_finite(records)?;
    let mapped: Vec<f64> = records.iter().map(|r| params.eval(r.predicted)).collect();
    let mos: Vec<f64> = records.iter().map(|r| r.mos).collect();
    if mapped.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput("mapping produced non-finite values"));
    }
    pearson(&mapped, &mos)
}

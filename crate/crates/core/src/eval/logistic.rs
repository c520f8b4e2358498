use serde::{Deserialize, Serialize};

use super::simplex::nelder_mead;
use super::{check_finite, PredictionRecord};
use crate::{rng, Error, Result};

pub const DEFAULT_HOLDOUT_FRACTION: f64 = 0.2;

const MIN_RECORDS: usize = 10;
const MAX_ITERATIONS: usize = 2000;
const SIMPLEX_TOL: f64 = 1e-13;

/// `g(x) = β1 (1/2 - 1 / (1 + exp(β2 (x - β3)))) + β4 x + β5`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
    pub beta5: f64,
}

impl LogisticParams {
    /// `g(x) = x`.
    pub const IDENTITY: Self = Self {
        beta1: 0.0,
        beta2: 1.0,
        beta3: 0.0,
        beta4: 1.0,
        beta5: 0.0,
    };

    pub fn eval(&self, x: f64) -> f64 {
        let s = 0.5 - 1.0 / (1.0 + (self.beta2 * (x - self.beta3)).exp());
        self.beta1 * s + self.beta4 * x + self.beta5
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticFit {
    pub params: LogisticParams,
    /// Sum of squared errors on the fitting subset.
    pub sse: f64,
    /// The least-squares line beat the simplex fit and was used instead.
    pub linear_fallback: bool,
    pub iterations: usize,
    pub fit_size: usize,
}

pub(crate) fn check_holdout(fraction: f64) -> Result<()> {
    if fraction > 0.0 && fraction <= 1.0 {
        Ok(())
    } else {
        Err(Error::BadConfig(format!(
            "holdout fraction must be in (0, 1], got {fraction}"
        )))
    }
}

/// FNV-1a, stable across platforms and releases.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Deterministic fitting subset: records ordered by `(mix(fnv1a(id)), id)`
/// with the SplitMix64 finalizer as `mix`,
/// first `max(ceil(fraction·n), min(n, 10))` taken.
pub(crate) fn holdout(records: &[PredictionRecord], fraction: f64) -> Vec<&PredictionRecord> {
    let n = records.len();
    let size = ((fraction * n as f64).ceil() as usize).max(n.min(MIN_RECORDS)).min(n);
    let mut keyed: Vec<(u64, &PredictionRecord)> =
        records.iter().map(|r| (rng::derive_seed(fnv1a(r.id.as_bytes()), &[]), r)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.id.cmp(&b.1.id)));
    keyed.into_iter().take(size).map(|(_, r)| r).collect()
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n;
    (m, var.sqrt())
}

fn least_squares_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let (mx, _) = mean_std(x);
    let (my, _) = mean_std(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn sse(params: &LogisticParams, x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let r = params.eval(*a) - b;
            r * r
        })
        .sum()
}

/// Least-squares `β1`, `β4`, `β5` for fixed `β2`, `β3`, with the SSE.
/// Collapses to the plain line when the sigmoid column is collinear with
/// the predictions.
fn linear_part(beta2: f64, beta3: f64, x: &[f64], y: &[f64]) -> (LogisticParams, f64) {
    let n = x.len() as f64;
    let s: Vec<f64> = x
        .iter()
        .map(|&v| 0.5 - 1.0 / (1.0 + (beta2 * (v - beta3)).exp()))
        .collect();
    let (ms, mx, my) = (s.iter().sum::<f64>() / n, x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sss, mut ssx, mut sxx, mut ssy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for ((&si, &xi), &yi) in s.iter().zip(x).zip(y) {
        let (ds, dx, dy) = (si - ms, xi - mx, yi - my);
        sss += ds * ds;
        ssx += ds * dx;
        sxx += dx * dx;
        ssy += ds * dy;
        sxy += dx * dy;
    }
    let det = sss * sxx - ssx * ssx;
    let (beta1, beta4) = if sss > 0.0 && det > 1e-12 * sss * sxx {
        ((ssy * sxx - sxy * ssx) / det, (sxy * sss - ssy * ssx) / det)
    } else {
        (0.0, sxy / sxx)
    };
    let params = LogisticParams {
        beta1,
        beta2,
        beta3,
        beta4,
        beta5: my - beta1 * ms - beta4 * mx,
    };
    let err = sse(&params, x, y);
    (params, if err.is_nan() { f64::INFINITY } else { err })
}

/// Fits the five-parameter logistic on a deterministic subset of `records`.
///
/// Simplex descent over `β2`, `β3` starts from `β2 = 1/std(pred)`,
/// `β3 = mean(pred)`; the remaining parameters are linear least-squares
/// solutions at every step. If the result does not
/// beat the ordinary least-squares line on the same subset, the line is
/// returned with `linear_fallback` set.
pub fn fit_logistic5(records: &[PredictionRecord], holdout_fraction: f64) -> Result<LogisticFit> {
    if records.len() < MIN_RECORDS {
        return Err(Error::DegenerateInput("logistic fit needs at least 10 records"));
    }
    check_holdout(holdout_fraction)?;
    check_finite(records)?;
    let subset = holdout(records, holdout_fraction);
    let x: Vec<f64> = subset.iter().map(|r| r.predicted).collect();
    let y: Vec<f64> = subset.iter().map(|r| r.mos).collect();
    let (mx, sx) = mean_std(&x);
    let (_, sy) = mean_std(&y);
    if sx == 0.0 || sy == 0.0 {
        return Err(Error::DegenerateInput("constant variable in fitting subset"));
    }
    // The simplex searches slope and centre in standardized units; the
    // amplitude, linear term and offset are solved exactly at each vertex.
    let unscale = |a: &[f64]| (a[0] / sx, mx + a[1] * sx);
    let objective = |a: &[f64]| {
        let (b2, b3) = unscale(a);
        linear_part(b2, b3, &x, &y).1
    };
    let result = nelder_mead(objective, &[1.0, 0.0], MAX_ITERATIONS, SIMPLEX_TOL);
    let (b2, b3) = unscale(&result.x);
    let (logistic, logistic_sse) = linear_part(b2, b3, &x, &y);

    let (slope, intercept) = least_squares_line(&x, &y);
    let line = LogisticParams {
        beta4: slope,
        beta5: intercept,
        ..LogisticParams::IDENTITY
    };
    let line_sse = sse(&line, &x, &y);

    let fit = if logistic_sse.is_finite() && logistic_sse < line_sse {
        LogisticFit {
            params: logistic,
            sse: logistic_sse,
            linear_fallback: false,
            iterations: result.iterations,
            fit_size: subset.len(),
        }
    } else {
        LogisticFit {
            params: line,
            sse: line_sse,
            linear_fallback: true,
            iterations: result.iterations,
            fit_size: subset.len(),
        }
    };
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holdout_is_deterministic_and_sized() {
        let recs: Vec<_> = (0..100)
            .map(|i| PredictionRecord::new(format!("img{i}"), i as f64, i as f64))
            .collect();
        let a: Vec<_> = holdout(&recs, 0.2).iter().map(|r| r.id.clone()).collect();
        let mut reversed = recs.clone();
        reversed.reverse();
        let b: Vec<_> = holdout(&reversed, 0.2).iter().map(|r| r.id.clone()).collect();
        assert_eq!(a.len(), 20);
        assert_eq!(a, b);
        assert_eq!(holdout(&recs[..12], 0.2).len(), 10);
    }

    #[test]
    fn identity_params_map_identity() {
        for x in [-3.0, 0.0, 17.5] {
            assert_eq!(LogisticParams::IDENTITY.eval(x), x);
        }
    }

    #[test]
    fn rejects_small_or_flat_inputs() {
        let few: Vec<_> = (0..5).map(|i| PredictionRecord::new(i.to_string(), i as f64, 1.0)).collect();
        assert!(fit_logistic5(&few, 0.2).is_err());
        let flat: Vec<_> = (0..20).map(|i| PredictionRecord::new(i.to_string(), 3.0, i as f64)).collect();
        assert!(matches!(fit_logistic5(&flat, 0.2), Err(Error::DegenerateInput(_))));
        let ok: Vec<_> = (0..20).map(|i| PredictionRecord::new(i.to_string(), i as f64, i as f64)).collect();
        assert!(fit_logistic5(&ok, 0.0).is_err());
    }
}

//! Composite cues, normalization into quality terms, and weighted fusion.
//!
//! Term order everywhere in this module (weights, q-terms, CSV columns) is
//! `blur, lowres, noise, under, over, haze, edge, fft`. Note that this is the
//! order in which the weights are listed, which is not the order in which
//! the normalized terms are usually displayed (under/over before noise).

use serde::{Deserialize, Serialize};

use crate::cues::{extract_cues, CannyParams, CueVector, ExposureThresholds, DEFAULT_HAZE_SIDE};
use crate::{Error, RgbImage, Result};

/// Number of fused quality terms.
pub const N_TERMS: usize = 8;

/// Names of the quality terms, in fusion order.
pub const TERM_NAMES: [&str; N_TERMS] =
    ["blur", "lowres", "noise", "under", "over", "haze", "edge", "fft"];

pub const DEFAULT_WEIGHTS: [f64; N_TERMS] = [0.30, 0.20, 0.15, 0.08, 0.07, 0.05, 0.10, 0.05];

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Calibration constants, fusion weights and cue parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FusionConfig {
    pub ref_lapvar: f64,
    pub ref_tenengrad: f64,
    pub ref_edge_blur: f64,
    pub ref_fft_lowres: f64,
    pub ref_noise: f64,
    pub ref_haze: f64,
    pub ref_edge_q: f64,
    pub ref_fft_q: f64,
    pub weights: [f64; N_TERMS],
    pub canny: CannyParams,
    pub exposure: ExposureThresholds,
    pub haze_side: usize,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            ref_lapvar: 1000.0,
            ref_tenengrad: 6000.0,
            ref_edge_blur: 0.05,
            ref_fft_lowres: 8.0,
            ref_noise: 15.0,
            ref_haze: 100.0,
            ref_edge_q: 0.2,
            ref_fft_q: 9.0,
            weights: DEFAULT_WEIGHTS,
            canny: CannyParams::default(),
            exposure: ExposureThresholds::default(),
            haze_side: DEFAULT_HAZE_SIDE,
        }
    }
}

impl FusionConfig {
    /// The eight reference constants as `(name, value)` pairs.
    pub fn references(&self) -> [(&'static str, f64); 8] {
        [
            ("ref_lapvar", self.ref_lapvar),
            ("ref_tenengrad", self.ref_tenengrad),
            ("ref_edge_blur", self.ref_edge_blur),
            ("ref_fft_lowres", self.ref_fft_lowres),
            ("ref_noise", self.ref_noise),
            ("ref_haze", self.ref_haze),
            ("ref_edge_q", self.ref_edge_q),
            ("ref_fft_q", self.ref_fft_q),
        ]
    }

    pub fn reference_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "ref_lapvar" => &mut self.ref_lapvar,
            "ref_tenengrad" => &mut self.ref_tenengrad,
            "ref_edge_blur" => &mut self.ref_edge_blur,
            "ref_fft_lowres" => &mut self.ref_fft_lowres,
            "ref_noise" => &mut self.ref_noise,
            "ref_haze" => &mut self.ref_haze,
            "ref_edge_q" => &mut self.ref_edge_q,
            "ref_fft_q" => &mut self.ref_fft_q,
            _ => return None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.references() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::BadConfig(format!("{name} must be > 0, got {value}")));
            }
        }
        check_weights(&self.weights)?;
        self.canny.validate()?;
        self.exposure.validate()?;
        if self.haze_side.is_multiple_of(2) {
            return Err(Error::EvenStructuringElement(self.haze_side));
        }
        Ok(())
    }

    /// Copy with weight `index` scaled by `factor` and all weights renormalized.
    pub fn with_scaled_weight(&self, index: usize, factor: f64) -> Self {
        let mut cfg = self.clone();
        cfg.weights[index] *= factor;
        let sum: f64 = cfg.weights.iter().sum();
        cfg.weights.iter_mut().for_each(|w| *w /= sum);
        cfg
    }
}

fn check_weights(weights: &[f64; N_TERMS]) -> Result<()> {
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE
    {
        return Err(Error::InvalidWeights { sum });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositeCues {
    pub blur_pct: f64,
    pub lowres_pct: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityBreakdown {
    pub cues: CueVector,
    pub composites: CompositeCues,
    /// Normalized terms in [`TERM_NAMES`] order.
    pub q_terms: [f64; N_TERMS],
    pub q_total: f64,
}

impl QualityBreakdown {
    /// Re-derives the total from the stored terms.
    pub fn recompute_total(&self, weights: &[f64; N_TERMS]) -> f64 {
        weighted_total(&self.q_terms, weights)
    }
}

/// `clamp((reference - value) / reference, 0, 1)`
fn deficit(value: f64, reference: f64) -> f64 {
    ((reference - value) / reference).clamp(0.0, 1.0)
}

/// Mean of the three sharpness deficits, as a percentage.
pub fn blur_percent(c: &CueVector, cfg: &FusionConfig) -> f64 {
    let a_lap = deficit(c.lap_var, cfg.ref_lapvar);
    let a_ten = deficit(c.tenengrad, cfg.ref_tenengrad);
    let a_edge = deficit(c.edge_density, cfg.ref_edge_blur);
    100.0 * (a_lap + a_ten + a_edge) / 3.0
}

/// Mean of the edge and spectral deficits, as a percentage.
pub fn lowres_percent(c: &CueVector, cfg: &FusionConfig) -> f64 {
    let b_edge = deficit(c.edge_density, cfg.ref_edge_blur);
    let b_fft = deficit(c.fft_energy, cfg.ref_fft_lowres);
    100.0 * (b_edge + b_fft) / 2.0
}

pub fn composite_cues(c: &CueVector, cfg: &FusionConfig) -> CompositeCues {
    CompositeCues {
        blur_pct: blur_percent(c, cfg),
        lowres_pct: lowres_percent(c, cfg),
    }
}

/// Maps cues into `[0, 1]` terms where 1 means no degradation.
pub fn normalize_terms(c: &CueVector, comp: &CompositeCues, cfg: &FusionConfig) -> [f64; N_TERMS] {
    let unit = |v: f64| v.clamp(0.0, 1.0);
    [
        unit(1.0 - comp.blur_pct / 100.0),
        unit(1.0 - comp.lowres_pct / 100.0),
        1.0 - (c.noise / cfg.ref_noise).min(1.0),
        unit(1.0 - c.under_pct / 100.0),
        unit(1.0 - c.over_pct / 100.0),
        1.0 - (c.haze / cfg.ref_haze).min(1.0),
        (c.edge_density / cfg.ref_edge_q).min(1.0),
        (c.fft_energy / cfg.ref_fft_q).min(1.0),
    ]
}

fn weighted_total(q: &[f64; N_TERMS], weights: &[f64; N_TERMS]) -> f64 {
    let s: f64 = q.iter().zip(weights).map(|(q, w)| q * w).sum();
    (100.0 * s).clamp(0.0, 100.0)
}

/// `Q = 100 Σ w_i q_i`.
pub fn fuse(q_terms: &[f64; N_TERMS], cfg: &FusionConfig) -> Result<f64> {
    check_weights(&cfg.weights)?;
    Ok(weighted_total(q_terms, &cfg.weights))
}

/// Fuses already-extracted cues.
pub fn score_cues(cues: CueVector, cfg: &FusionConfig) -> Result<QualityBreakdown> {
    let composites = composite_cues(&cues, cfg);
    let q_terms = normalize_terms(&cues, &composites, cfg);
    let q_total = fuse(&q_terms, cfg)?;
    Ok(QualityBreakdown {
        cues,
        composites,
        q_terms,
        q_total,
    })
}

/// Full pipeline: grayscale, primitive cues, composites, fusion.
pub fn score_image(img: &RgbImage, cfg: &FusionConfig) -> Result<QualityBreakdown> {
    cfg.validate()?;
    let cues = extract_cues(img, &cfg.canny, &cfg.exposure, cfg.haze_side)?;
    score_cues(cues, cfg)
}

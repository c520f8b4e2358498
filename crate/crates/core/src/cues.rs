//! The eight primitive cues measured on one frame.

use serde::{Deserialize, Serialize};

use crate::imgops::{
    self, correlate3_real, convolve3, dark_channel, erode, histogram256, median3, GrayImage,
    Kernel3, RgbImage,
};
use crate::{Error, Result};

pub mod canny;

pub use canny::{canny, CannyParams};

/// Default side of the square structuring element used by the haze proxy.
pub const DEFAULT_HAZE_SIDE: usize = 15;

/// Primitive measurements for one image.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CueVector {
    /// Sample variance of the Laplacian response (intensity²).
    pub lap_var: f64,
    /// Mean squared Sobel gradient magnitude.
    pub tenengrad: f64,
    /// Fraction of Canny edge pixels, in `[0, 1]`.
    pub edge_density: f64,
    /// Mean of `ln(1 + |DFT|)` over all frequencies.
    pub fft_energy: f64,
    /// RMS of the 3x3 median residual.
    pub noise: f64,
    /// Percentage of pixels below the under-exposure threshold.
    pub under_pct: f64,
    /// Percentage of pixels above the over-exposure threshold.
    pub over_pct: f64,
    /// Mean of the eroded dark channel, in `[0, 255]`.
    pub haze: f64,
}

/// Histogram tail thresholds. Levels equal to a threshold belong to neither tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExposureThresholds {
    pub t_under: u8,
    pub t_over: u8,
}

impl Default for ExposureThresholds {
    fn default() -> Self {
        Self {
            t_under: 30,
            t_over: 225,
        }
    }
}

impl ExposureThresholds {
    pub fn validate(&self) -> Result<()> {
        if self.t_under >= self.t_over {
            return Err(Error::BadConfig(format!(
                "t_under ({}) must be below t_over ({})",
                self.t_under, self.t_over
            )));
        }
        Ok(())
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample variance (divisor `MN - 1`) of the same-size Laplacian response.
pub fn laplacian_variance(img: &GrayImage) -> Result<f64> {
    let lap = convolve3(img, &Kernel3::LAPLACIAN)?;
    let values = lap.values();
    let mu = mean(values);
    let ss: f64 = values.iter().map(|v| (v - mu) * (v - mu)).sum();
    Ok(ss / (values.len() - 1) as f64)
}

/// Mean of `Gx² + Gy²` over every pixel, replicated borders included.
pub fn tenengrad(img: &GrayImage) -> Result<f64> {
    let gx = convolve3(img, &Kernel3::SOBEL_X)?;
    let gy = convolve3(img, &Kernel3::SOBEL_Y)?;
    let sum: f64 = gx
        .values()
        .iter()
        .zip(gy.values())
        .map(|(a, b)| a * a + b * b)
        .sum();
    Ok(sum / img.len() as f64)
}

/// Fraction of pixels marked as edges by [`canny`].
pub fn edge_density(img: &GrayImage, params: &CannyParams) -> Result<f64> {
    let edges = canny(img, params)?;
    let count = edges.iter().filter(|&&e| e).count();
    Ok(count as f64 / img.len() as f64)
}

/// `(1 / MN) Σ ln(1 + |DFT(Y)(u, v)|)`, DC included.
pub fn fft_energy(img: &GrayImage) -> f64 {
    let spectrum = imgops::dft2(img);
    let sum: f64 = spectrum.iter().map(|c| c.norm().ln_1p()).sum();
    sum / img.len() as f64
}

/// RMS of `Y - median3(Y)`, computed in real arithmetic.
pub fn noise_estimate(img: &GrayImage) -> Result<f64> {
    let med = median3(img)?;
    let ss: f64 = img
        .pixels()
        .iter()
        .zip(med.pixels())
        .map(|(&a, &b)| {
            let d = f64::from(a) - f64::from(b);
            d * d
        })
        .sum();
    Ok((ss / img.len() as f64).sqrt())
}

/// Percentages of pixels strictly below `t_under` and strictly above `t_over`.
pub fn exposure_tails(img: &GrayImage, t: &ExposureThresholds) -> (f64, f64) {
    let hist = histogram256(img);
    let n = img.len() as f64;
    let under: u64 = hist[..t.t_under as usize].iter().sum();
    let over: u64 = hist[t.t_over as usize + 1..].iter().sum();
    (100.0 * under as f64 / n, 100.0 * over as f64 / n)
}

/// Mean of the dark channel after a `side x side` erosion.
pub fn haze_proxy(img: &RgbImage, side: usize) -> Result<f64> {
    let dark = erode(&dark_channel(img), side)?;
    let sum: u64 = dark.pixels().iter().map(|&v| u64::from(v)).sum();
    Ok(sum as f64 / dark.len() as f64)
}

/// Computes all eight cues, sharing one grayscale conversion.
pub fn extract_cues(
    img: &RgbImage,
    canny_params: &CannyParams,
    exposure: &ExposureThresholds,
    haze_side: usize,
) -> Result<CueVector> {
    let gray = imgops::to_grayscale(img);
    let (under_pct, over_pct) = exposure_tails(&gray, exposure);
    Ok(CueVector {
        lap_var: laplacian_variance(&gray)?,
        tenengrad: tenengrad(&gray)?,
        edge_density: edge_density(&gray, canny_params)?,
        fft_energy: fft_energy(&gray),
        noise: noise_estimate(&gray)?,
        under_pct,
        over_pct,
        haze: haze_proxy(img, haze_side)?,
    })
}

/// Sobel gradients of a real-valued raster.
pub(crate) fn sobel_real(src: &[f64], width: usize, height: usize) -> (Vec<f64>, Vec<f64>) {
    let gx = correlate3_real(src, width, height, &Kernel3::SOBEL_X).into_values();
    let gy = correlate3_real(src, width, height, &Kernel3::SOBEL_Y).into_values();
    (gx, gy)
}

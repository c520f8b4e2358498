//! Canny edge detector with fixed stages:
//! 5x5 Gaussian (σ = 1), Sobel gradients, L2 magnitude, four-direction
//! non-maximum suppression and 8-connected hysteresis.

use serde::{Deserialize, Serialize};

use crate::imgops::GrayImage;
use crate::{Error, Result};

use super::sobel_real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CannyParams {
    pub t_low: f64,
    pub t_high: f64,
}

impl Default for CannyParams {
    fn default() -> Self {
        Self {
            t_low: 100.0,
            t_high: 200.0,
        }
    }
}

impl CannyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_low >= 0.0 && self.t_low <= self.t_high && self.t_high.is_finite()) {
            return Err(Error::BadConfig(format!(
                "canny thresholds must satisfy 0 <= low <= high (got {}, {})",
                self.t_low, self.t_high
            )));
        }
        Ok(())
    }
}

const SMOOTH_SIGMA: f64 = 1.0;
const SMOOTH_RADIUS: usize = 2;

fn gaussian_taps() -> [f64; 2 * SMOOTH_RADIUS + 1] {
    let mut taps = [0.0; 2 * SMOOTH_RADIUS + 1];
    for (i, t) in taps.iter_mut().enumerate() {
        let d = i as f64 - SMOOTH_RADIUS as f64;
        *t = (-d * d / (2.0 * SMOOTH_SIGMA * SMOOTH_SIGMA)).exp();
    }
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);
    taps
}

/// Separable 5x5 Gaussian with replicated borders, kept in real arithmetic.
fn smooth(img: &GrayImage) -> Vec<f64> {
    let (w, h) = (img.width(), img.height());
    let taps = gaussian_taps();
    let r = SMOOTH_RADIUS as isize;
    let src = img.pixels();
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = 0.0;
            for (k, t) in taps.iter().enumerate() {
                let xi = (x as isize + k as isize - r).clamp(0, w as isize - 1) as usize;
                acc += t * f64::from(row[xi]);
            }
            tmp[y * w + x] = acc;
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, t) in taps.iter().enumerate() {
                let yi = (y as isize + k as isize - r).clamp(0, h as isize - 1) as usize;
                acc += t * tmp[yi * w + x];
            }
            out[y * w + x] = acc;
        }
    }
    out
}

/// tan(22.5°)
const TAN_22_5: f64 = 0.414_213_562_373_095_1;

/// Binary edge map (row-major) for `img`.
pub fn canny(img: &GrayImage, params: &CannyParams) -> Result<Vec<bool>> {
    if img.width() < 3 || img.height() < 3 {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
        });
    }
    params.validate()?;
    let (w, h) = (img.width(), img.height());
    let smoothed = smooth(img);
    let (gx, gy) = sobel_real(&smoothed, w, h);
    let mag: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| a.hypot(*b)).collect();

    let at = |x: isize, y: isize| {
        let xi = x.clamp(0, w as isize - 1) as usize;
        let yi = y.clamp(0, h as isize - 1) as usize;
        mag[yi * w + xi]
    };

    // Non-maximum suppression. A pixel survives when it is strictly above
    // its neighbour on the negative side of the gradient and not below the
    // one on the positive side, so two-pixel plateaus yield a single edge.
    let mut thin = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let m = mag[i];
            if m <= params.t_low {
                continue;
            }
            let (dx, dy) = (gx[i], gy[i]);
            let (ax, ay) = (dx.abs(), dy.abs());
            let (xi, yi) = (x as isize, y as isize);
            let (before, after) = if ay <= ax * TAN_22_5 {
                (at(xi - 1, yi), at(xi + 1, yi))
            } else if ax <= ay * TAN_22_5 {
                (at(xi, yi - 1), at(xi, yi + 1))
            } else if (dx > 0.0) == (dy > 0.0) {
                (at(xi - 1, yi - 1), at(xi + 1, yi + 1))
            } else {
                (at(xi + 1, yi - 1), at(xi - 1, yi + 1))
            };
            if m > before && m >= after {
                thin[i] = m;
            }
        }
    }

    // Hysteresis: grow from strong pixels through weak ones.
    let mut edges = vec![false; w * h];
    let mut stack = Vec::new();
    for start in 0..w * h {
        if thin[start] <= params.t_high || edges[start] {
            continue;
        }
        edges[start] = true;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            for ny in y - 1..=y + 1 {
                for nx in x - 1..=x + 1 {
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if !edges[j] && thin[j] > params.t_low {
                        edges[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
    }
    Ok(edges)
}

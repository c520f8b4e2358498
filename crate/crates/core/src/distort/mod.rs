//! Synthetic single-family distortions for building paired corpora.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{rng, Error, Result, RgbImage};

#[cfg(feature = "io")]
mod corpus;
#[cfg(feature = "io")]
pub use corpus::{build_corpus, CorpusManifest, CorpusRecord, LevelOverrides, MANIFEST_FILE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Blur,
    LowRes,
    Noise,
    Haze,
    Under,
    Over,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Blur,
        Family::LowRes,
        Family::Noise,
        Family::Haze,
        Family::Under,
        Family::Over,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Blur => "Blur",
            Family::LowRes => "LowRes",
            Family::Noise => "Noise",
            Family::Haze => "Haze",
            Family::Under => "Under",
            Family::Over => "Over",
        }
    }

    /// Severity levels of the reference corpus, mildest first.
    pub fn levels(self) -> &'static [f64] {
        match self {
            Family::Blur => &[1.5, 3.0, 5.0],
            Family::LowRes => &[2.0, 3.0, 4.0],
            Family::Noise => &[5.0, 15.0, 25.0],
            Family::Haze => &[0.8, 0.7, 0.6],
            Family::Under => &[1.2, 1.4],
            Family::Over => &[0.8, 0.6],
        }
    }

    pub fn strongest_level(self) -> f64 {
        *self.levels().last().unwrap()
    }

    fn index(self) -> u64 {
        Family::ALL.iter().position(|&f| f == self).unwrap() as u64
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::BadConfig(format!("unknown distortion family {s:?}")))
    }
}

/// One distortion to apply: family, severity, and (for noise) the RNG seed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistortionSpec {
    pub family: Family,
    pub level: f64,
    pub rng_seed: u64,
}

impl DistortionSpec {
    pub fn new(family: Family, level: f64, rng_seed: u64) -> Self {
        Self {
            family,
            level,
            rng_seed,
        }
    }

    /// Strict mode requires one of [`Family::levels`]; free mode accepts any
    /// level the operator itself accepts, logging a warning when off-grid.
    pub fn validate(&self, strict: bool) -> Result<()> {
        let on_grid = self
            .family
            .levels()
            .iter()
            .any(|l| (l - self.level).abs() < 1e-9);
        if on_grid {
            return Ok(());
        }
        if !(self.level.is_finite() && self.level > 0.0) {
            return Err(Error::BadLevel {
                family: self.family.name(),
                level: self.level,
                reason: "level must be positive",
            });
        }
        if strict {
            return Err(Error::BadLevel {
                family: self.family.name(),
                level: self.level,
                reason: "not one of the standard severity levels",
            });
        }
        log::warn!(
            "{} level {} is outside the standard set {:?}",
            self.family,
            self.level,
            self.family.levels()
        );
        Ok(())
    }

    pub fn apply(&self, img: &RgbImage) -> Result<RgbImage> {
        match self.family {
            Family::Blur => apply_blur(img, self.level),
            Family::LowRes => {
                if self.level.fract() != 0.0 || self.level < 2.0 {
                    return Err(Error::BadLevel {
                        family: "LowRes",
                        level: self.level,
                        reason: "factor must be an integer >= 2",
                    });
                }
                apply_lowres(img, self.level as usize)
            }
            Family::Noise => apply_noise(img, self.level, self.rng_seed),
            Family::Haze => apply_haze(img, self.level),
            Family::Under | Family::Over => apply_gamma(img, self.level),
        }
    }
}

/// Seed for the distortion of `family` applied to the `index`-th image.
pub fn distortion_seed(seed: u64, index: u64, family: Family) -> u64 {
    rng::derive_seed(seed, &[index, family.index()])
}

#[inline]
fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|d| (-((d * d) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Separable pass over a planar real channel with replicated borders.
fn convolve_separable(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let r = (kernel.len() / 2) as isize;
    let mut tmp = vec![0.0; width * height];
    for y in 0..height {
        let row = &src[y * width..(y + 1) * width];
        for x in 0..width {
            tmp[y * width + x] = kernel
                .iter()
                .enumerate()
                .map(|(k, w)| {
                    let xi = (x as isize + k as isize - r).clamp(0, width as isize - 1);
                    w * row[xi as usize]
                })
                .sum();
        }
    }
    let mut out = vec![0.0; width * height];
    for y in 0..height {
        for (k, w) in kernel.iter().enumerate() {
            let yi = (y as isize + k as isize - r).clamp(0, height as isize - 1) as usize;
            let src_row = &tmp[yi * width..(yi + 1) * width];
            for (o, s) in out[y * width..(y + 1) * width].iter_mut().zip(src_row) {
                *o += w * s;
            }
        }
    }
    out
}

/// Per-channel Gaussian blur, kernel radius `ceil(3σ)`. `σ = 0` is the
/// identity.
pub fn apply_blur(img: &RgbImage, sigma: f64) -> Result<RgbImage> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::BadLevel {
            family: "Blur",
            level: sigma,
            reason: "sigma must be >= 0",
        });
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let kernel = gaussian_kernel(sigma);
    let (w, h) = (img.width(), img.height());
    let planes = img.planes().map(|plane| {
        let real: Vec<f64> = plane.iter().map(|&v| f64::from(v)).collect();
        convolve_separable(&real, w, h, &kernel)
            .into_iter()
            .map(to_u8)
            .collect::<Vec<u8>>()
    });
    RgbImage::from_planes(w, h, planes)
}

/// Catmull-Rom (a = -0.5) cubic weights for fractional offset `t` in `[0, 1)`.
fn cubic_weights(t: f64) -> [f64; 4] {
    const A: f64 = -0.5;
    let w = |x: f64| {
        let x = x.abs();
        if x <= 1.0 {
            (A + 2.0) * x.powi(3) - (A + 3.0) * x * x + 1.0
        } else if x < 2.0 {
            A * x.powi(3) - 5.0 * A * x * x + 8.0 * A * x - 4.0 * A
        } else {
            0.0
        }
    };
    [w(1.0 + t), w(t), w(1.0 - t), w(2.0 - t)]
}

/// Taps and weights for resampling `src_len` samples onto `dst_len`
/// with pixel-centre alignment and clamped borders.
fn cubic_taps(src_len: usize, dst_len: usize) -> Vec<([usize; 4], [f64; 4])> {
    let scale = src_len as f64 / dst_len as f64;
    (0..dst_len)
        .map(|d| {
            let s = (d as f64 + 0.5) * scale - 0.5;
            let base = s.floor();
            let weights = cubic_weights(s - base);
            let base = base as isize;
            let idx = [-1, 0, 1, 2].map(|o| (base + o).clamp(0, src_len as isize - 1) as usize);
            (idx, weights)
        })
        .collect()
}

/// Box-average downsample by `factor`, then bicubic upsample to the input size.
///
/// Edge blocks that do not fill a full `factor x factor` tile average the
/// pixels they do cover.
pub fn apply_lowres(img: &RgbImage, factor: usize) -> Result<RgbImage> {
    if factor < 2 {
        return Err(Error::BadLevel {
            family: "LowRes",
            level: factor as f64,
            reason: "factor must be >= 2",
        });
    }
    let (w, h) = (img.width(), img.height());
    let (sw, sh) = (w.div_ceil(factor), h.div_ceil(factor));
    let col_taps = cubic_taps(sw, w);
    let row_taps = cubic_taps(sh, h);
    let planes = img.planes().map(|plane| {
        let mut small = vec![0.0; sw * sh];
        for by in 0..sh {
            for bx in 0..sw {
                let (x0, y0) = (bx * factor, by * factor);
                let (x1, y1) = ((x0 + factor).min(w), (y0 + factor).min(h));
                let mut acc = 0u32;
                for y in y0..y1 {
                    acc += plane[y * w + x0..y * w + x1].iter().map(|&v| u32::from(v)).sum::<u32>();
                }
                small[by * sw + bx] = f64::from(acc) / ((x1 - x0) * (y1 - y0)) as f64;
            }
        }
        // Horizontal upsample of each small row, then vertical.
        let mut wide = vec![0.0; w * sh];
        for y in 0..sh {
            for (x, (idx, wt)) in col_taps.iter().enumerate() {
                wide[y * w + x] = (0..4).map(|k| wt[k] * small[y * sw + idx[k]]).sum();
            }
        }
        let mut out = Vec::with_capacity(w * h);
        for (idx, wt) in &row_taps {
            for x in 0..w {
                let v: f64 = (0..4).map(|k| wt[k] * wide[idx[k] * w + x]).sum();
                out.push(to_u8(v));
            }
        }
        out
    });
    RgbImage::from_planes(w, h, planes)
}

/// Adds i.i.d. zero-mean Gaussian noise to every channel value.
///
/// Draws come from ChaCha8 seeded with `seed`, consumed in interleaved
/// row-major channel order.
pub fn apply_noise(img: &RgbImage, sigma: f64, seed: u64) -> Result<RgbImage> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::BadLevel {
            family: "Noise",
            level: sigma,
            reason: "sigma must be >= 0",
        });
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let mut rng = rng::stream(seed, &[]);
    Ok(img.map_channels(|v| {
        let z: f64 = rng.sample(StandardNormal);
        to_u8(f64::from(v) + sigma * z)
    }))
}

/// Constant-transmission haze with white air-light: `t·I + (1 - t)·255`.
pub fn apply_haze(img: &RgbImage, t: f64) -> Result<RgbImage> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::BadLevel {
            family: "Haze",
            level: t,
            reason: "transmission must be in (0, 1]",
        });
    }
    let lut: Vec<u8> = (0..256)
        .map(|v| to_u8(t * v as f64 + (1.0 - t) * 255.0))
        .collect();
    Ok(img.map_channels(|v| lut[v as usize]))
}

/// Power-law tone map `255·(I/255)^γ`; γ > 1 darkens, γ < 1 brightens.
pub fn apply_gamma(img: &RgbImage, gamma: f64) -> Result<RgbImage> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::BadLevel {
            family: if gamma >= 1.0 { "Under" } else { "Over" },
            level: gamma,
            reason: "gamma must be > 0",
        });
    }
    let lut: Vec<u8> = (0..256)
        .map(|v| to_u8(255.0 * (v as f64 / 255.0).powf(gamma)))
        .collect();
    Ok(img.map_channels(|v| lut[v as usize]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gradient(w: usize, h: usize) -> RgbImage {
        let pixels = (0..w * h)
            .flat_map(|i| {
                let (x, y) = (i % w, i / w);
                [(x * 7 % 256) as u8, (y * 11 % 256) as u8, ((x + y) * 3 % 256) as u8]
            })
            .collect();
        RgbImage::new(w, h, pixels).unwrap()
    }

    #[test]
    fn constant_images_are_fixed_points() {
        let c = RgbImage::filled(30, 20, [90, 140, 200]).unwrap();
        for sigma in [1.5, 3.0, 5.0] {
            assert_eq!(apply_blur(&c, sigma).unwrap(), c);
        }
        for f in [2, 3, 4] {
            assert_eq!(apply_lowres(&c, f).unwrap(), c);
        }
    }

    #[test]
    fn lowres_preserves_dimensions() {
        let img = gradient(100, 77);
        let out = apply_lowres(&img, 3).unwrap();
        assert_eq!((out.width(), out.height()), (100, 77));
        // A factor larger than the image collapses it to its mean.
        let tiny = RgbImage::new(3, 3, (0..27).map(|i| (i * 9) as u8).collect()).unwrap();
        let flat = apply_lowres(&tiny, 4).unwrap();
        assert!(flat.pixels().chunks(3).all(|p| p == flat.pixel(0, 0)));
        assert!(matches!(apply_lowres(&img, 1), Err(Error::BadLevel { .. })));
    }

    #[test]
    fn cubic_weights_partition_unity() {
        for t in [0.0, 0.1, 0.25, 0.5, 0.9] {
            let s: f64 = cubic_weights(t).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert_eq!(cubic_weights(0.0), [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn noise_examples() {
        let img = gradient(16, 16);
        assert_eq!(apply_noise(&img, 0.0, 1).unwrap(), img);
        let a = apply_noise(&img, 15.0, 42).unwrap();
        let b = apply_noise(&img, 15.0, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, apply_noise(&img, 15.0, 43).unwrap());
        assert!(apply_noise(&img, -1.0, 0).is_err());
    }

    #[test]
    fn haze_examples() {
        let img = RgbImage::filled(4, 4, [100, 0, 255]).unwrap();
        assert_eq!(apply_haze(&img, 1.0).unwrap(), img);
        let hazy = apply_haze(&img, 0.8).unwrap();
        assert_eq!(hazy.pixel(0, 0), [131, 51, 255]);
        let black = RgbImage::filled(4, 4, [0, 0, 0]).unwrap();
        assert!(apply_haze(&black, 0.6).unwrap().pixels().iter().all(|&v| v == 102));
        assert!(apply_haze(&img, 0.0).is_err());
        assert!(apply_haze(&img, 1.2).is_err());
    }

    #[test]
    fn gamma_examples() {
        let img = gradient(9, 9);
        assert_eq!(apply_gamma(&img, 1.0).unwrap(), img);
        let ends = RgbImage::filled(3, 3, [0, 255, 128]).unwrap();
        for g in [0.6, 0.8, 1.2, 1.4] {
            let out = apply_gamma(&ends, g).unwrap();
            assert_eq!(out.pixel(1, 1)[0], 0);
            assert_eq!(out.pixel(1, 1)[1], 255);
        }
        assert_eq!(apply_gamma(&ends, 1.4).unwrap().pixel(0, 0)[2], 97);
        assert!(apply_gamma(&ends, 0.0).is_err());
    }

    #[test]
    fn blur_rejects_negative_sigma() {
        let img = gradient(8, 8);
        assert_eq!(apply_blur(&img, 0.0).unwrap(), img);
        assert!(apply_blur(&img, -2.0).is_err());
    }

    #[test]
    fn level_validation() {
        assert!(DistortionSpec::new(Family::Blur, 3.0, 0).validate(true).is_ok());
        assert!(matches!(
            DistortionSpec::new(Family::Blur, 2.0, 0).validate(true),
            Err(Error::BadLevel { .. })
        ));
        assert!(DistortionSpec::new(Family::Blur, 2.0, 0).validate(false).is_ok());
        for bad in [0.0, -1.0, f64::NAN] {
            assert!(DistortionSpec::new(Family::Haze, bad, 0).validate(false).is_err());
        }
        let img = gradient(12, 12);
        assert!(DistortionSpec::new(Family::LowRes, 2.5, 0).apply(&img).is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("lowres".parse::<Family>().unwrap(), Family::LowRes);
        assert_eq!("Over".parse::<Family>().unwrap(), Family::Over);
        assert!("jpeg".parse::<Family>().is_err());
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
    }
}

//! No-reference image quality scoring built from eight interpretable
//! distortion cues.
//!
//! The pipeline converts an RGB frame to 8-bit luma, measures sharpness
//! (Laplacian variance, Tenengrad), Canny edge density, log spectral
//! energy, a median-residual noise level, exposure tails and a dark-channel
//! haze proxy, then folds them into two composite cues (`Blur%`,
//! `LowRes%`) and a weighted score in `[0, 100]`.
//!
//! ```
//! use mmiqa::{fixtures, score::{score_image, FusionConfig}};
//!
//! let img = fixtures::detail_scene(7, 96, 96);
//! let breakdown = score_image(&img, &FusionConfig::default()).unwrap();
//! assert!((0.0..=100.0).contains(&breakdown.q_total));
//! ```
//!
//! Besides scoring, the crate synthesizes distorted corpora ([`distort`])
//! and evaluates predictions against opinion scores ([`eval`]).

pub mod config;
pub mod cues;
pub mod distort;
mod error;
pub mod eval;
pub mod fixtures;
pub mod imgops;
pub mod rng;
pub mod score;

#[cfg(feature = "parallel")]
pub mod batch;
#[cfg(feature = "io")]
pub mod io;

pub use error::{Error, Result};
pub use imgops::{GrayImage, RealMatrix, RgbImage};

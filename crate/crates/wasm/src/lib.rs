//! Browser bindings: score a canvas, distort it, and sweep a family's
//! severity grid. Pixel buffers are canvas-style RGBA; alpha is ignored on
//! input and written as 255.

use mmiqa::distort::{DistortionSpec, Family};
use mmiqa::eval::family_cue;
use mmiqa::score::{score_image, FusionConfig, QualityBreakdown, TERM_NAMES};
use mmiqa::{fixtures, Error, RgbImage};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn from_rgba(rgba: &[u8], width: usize, height: usize) -> mmiqa::Result<RgbImage> {
    if rgba.len() != width * height * 4 {
        return Err(Error::BufferSize {
            width,
            height,
            expected: width * height * 4,
            got: rgba.len(),
        });
    }
    let rgb = rgba.chunks_exact(4).flat_map(|p| [p[0], p[1], p[2]]).collect();
    RgbImage::new(width, height, rgb)
}

fn to_rgba(img: &RgbImage) -> Vec<u8> {
    img.pixels()
        .chunks_exact(3)
        .flat_map(|p| [p[0], p[1], p[2], 255])
        .collect()
}

#[derive(Serialize)]
struct Term {
    name: &'static str,
    value: f64,
    weight: f64,
}

#[derive(Serialize)]
struct ScoreView<'a> {
    #[serde(flatten)]
    breakdown: &'a QualityBreakdown,
    terms: Vec<Term>,
}

pub fn score_json(rgba: &[u8], width: usize, height: usize) -> mmiqa::Result<String> {
    let cfg = FusionConfig::default();
    let b = score_image(&from_rgba(rgba, width, height)?, &cfg)?;
    let terms = TERM_NAMES
        .iter()
        .zip(b.q_terms.iter().zip(cfg.weights))
        .map(|(&name, (&value, weight))| Term { name, value, weight })
        .collect();
    Ok(serde_json::to_string(&ScoreView { breakdown: &b, terms }).expect("finite values serialize"))
}

pub fn distort(
    rgba: &[u8],
    width: usize,
    height: usize,
    family: &str,
    level: f64,
    seed: u32,
) -> mmiqa::Result<Vec<u8>> {
    let family: Family = family.parse()?;
    let spec = DistortionSpec::new(family, level, u64::from(seed));
    spec.validate(false)?;
    Ok(to_rgba(&spec.apply(&from_rgba(rgba, width, height)?)?))
}

#[derive(Serialize)]
struct SweepPoint {
    level: f64,
    q_total: f64,
    cue: f64,
}

pub fn sweep_json(rgba: &[u8], width: usize, height: usize, family: &str, seed: u32) -> mmiqa::Result<String> {
    let family: Family = family.parse()?;
    let cfg = FusionConfig::default();
    let img = from_rgba(rgba, width, height)?;
    let clean = score_image(&img, &cfg)?;
    let mut points = vec![SweepPoint {
        level: f64::NAN,
        q_total: clean.q_total,
        cue: family_cue(family, &clean),
    }];
    for &level in family.levels() {
        let b = score_image(&DistortionSpec::new(family, level, u64::from(seed)).apply(&img)?, &cfg)?;
        points.push(SweepPoint {
            level,
            q_total: b.q_total,
            cue: family_cue(family, &b),
        });
    }
    // The clean baseline is serialized with `level: null`.
    Ok(serde_json::to_string(&points).expect("sweep values serialize"))
}

fn js_err(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Quality breakdown of an RGBA buffer as JSON.
#[wasm_bindgen(js_name = scoreRgba)]
pub fn score_rgba(rgba: &[u8], width: usize, height: usize) -> Result<String, JsError> {
    score_json(rgba, width, height).map_err(js_err)
}

/// Applies one distortion and returns the new RGBA buffer.
#[wasm_bindgen(js_name = distortRgba)]
pub fn distort_rgba(
    rgba: &[u8],
    width: usize,
    height: usize,
    family: &str,
    level: f64,
    seed: u32,
) -> Result<Vec<u8>, JsError> {
    distort(rgba, width, height, family, level, seed).map_err(js_err)
}

/// Q and the family's own cue across its severity grid, clean first.
#[wasm_bindgen(js_name = severitySweep)]
pub fn severity_sweep(
    rgba: &[u8],
    width: usize,
    height: usize,
    family: &str,
    seed: u32,
) -> Result<String, JsError> {
    sweep_json(rgba, width, height, family, seed).map_err(js_err)
}

/// Synthetic test scene as RGBA.
#[wasm_bindgen(js_name = demoScene)]
pub fn demo_scene(seed: u32, width: usize, height: usize) -> Vec<u8> {
    to_rgba(&fixtures::detail_scene(u64::from(seed), width.max(3), height.max(3)))
}

/// Severity grid of a family, for populating controls.
#[wasm_bindgen(js_name = familyLevels)]
pub fn family_levels(family: &str) -> Result<Vec<f64>, JsError> {
    let family: Family = family.parse().map_err(js_err)?;
    Ok(family.levels().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene() -> (Vec<u8>, usize, usize) {
        (demo_scene(2, 64, 48), 64, 48)
    }

    #[test]
    fn score_matches_the_core() {
        let (rgba, w, h) = scene();
        let v: serde_json::Value = serde_json::from_str(&score_json(&rgba, w, h).unwrap()).unwrap();
        let direct = score_image(&fixtures::detail_scene(2, 64, 48), &FusionConfig::default()).unwrap();
        assert_eq!(v["q_total"].as_f64(), Some(direct.q_total));
        assert_eq!(v["terms"].as_array().unwrap().len(), 8);
        assert_eq!(v["terms"][0]["name"], "blur");
    }

    #[test]
    fn bad_buffers_are_rejected() {
        assert!(matches!(score_json(&[0; 10], 3, 3), Err(Error::BufferSize { .. })));
        assert!(distort(&[0; 36], 3, 3, "sharpen", 1.0, 0).is_err());
        assert!(matches!(distort(&[0; 36], 3, 3, "blur", -1.0, 0), Err(Error::BadLevel { .. })));
    }

    #[test]
    fn distortion_keeps_shape_and_opacity() {
        let (rgba, w, h) = scene();
        let out = distort(&rgba, w, h, "noise", 25.0, 9).unwrap();
        assert_eq!(out.len(), rgba.len());
        assert!(out.chunks_exact(4).all(|p| p[3] == 255));
        assert_ne!(out, rgba);
        assert_eq!(out, distort(&rgba, w, h, "noise", 25.0, 9).unwrap());
    }

    #[test]
    fn blur_sweep_lowers_q() {
        let (rgba, w, h) = scene();
        let v: serde_json::Value = serde_json::from_str(&sweep_json(&rgba, w, h, "blur", 0).unwrap()).unwrap();
        let pts = v.as_array().unwrap();
        assert_eq!(pts.len(), 1 + Family::Blur.levels().len());
        assert!(pts[0]["level"].is_null());
        let q: Vec<f64> = pts.iter().map(|p| p["q_total"].as_f64().unwrap()).collect();
        assert!(q.windows(2).all(|p| p[1] <= p[0]), "{q:?}");
    }
}

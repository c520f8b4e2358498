//! Deterministic synthetic scenes for tests, benchmarks and demos.
//!
//! A scene is a smooth two-colour gradient carrying flat-shaded discs,
//! rectangles and strokes, a soft sinusoidal texture patch, and a
//! full-range gray ramp along the bottom edge. The ramp guarantees pixels
//! just inside both exposure thresholds, so gamma changes move the tail
//! fractions.

use rand::Rng;

use crate::{rng, RgbImage};

const FIXTURE_STREAM: u64 = 0x5ce7e;
/// Image area per shape.
const SHAPE_AREA: f64 = 900.0;
/// Shape offsets from the background. Same-sign neighbours then differ by
/// less than 20 levels and all other boundaries by more than 90, keeping
/// edge magnitudes clear of the default hysteresis band.
const SHIFT_MIN: f64 = 92.0;
const SHIFT_MAX: f64 = 110.0;

#[derive(Clone, Copy)]
enum Shape {
    Disc { cx: f64, cy: f64, r: f64 },
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
    Stroke { x0: f64, y0: f64, x1: f64, y1: f64, half_width: f64 },
}

impl Shape {
    fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Shape::Disc { cx, cy, r } => (x - cx).powi(2) + (y - cy).powi(2) <= r * r,
            Shape::Rect { x0, y0, x1, y1 } => x >= x0 && x < x1 && y >= y0 && y < y1,
            Shape::Stroke { x0, y0, x1, y1, half_width } => {
                let (dx, dy) = (x1 - x0, y1 - y0);
                let len2 = dx * dx + dy * dy;
                let t = (((x - x0) * dx + (y - y0) * dy) / len2).clamp(0.0, 1.0);
                let (px, py) = (x0 + t * dx, y0 + t * dy);
                (x - px).powi(2) + (y - py).powi(2) <= half_width * half_width
            }
        }
    }
}

fn colour<R: Rng>(r: &mut R, lo: f64, hi: f64) -> [f64; 3] {
    [r.random_range(lo..hi), r.random_range(lo..hi), r.random_range(lo..hi)]
}

/// A `width`×`height` scene determined entirely by `seed`.
///
/// # Panics
///
/// If either side is below 3.
pub fn detail_scene(seed: u64, width: usize, height: usize) -> RgbImage {
    assert!(width >= 3 && height >= 3, "fixture must be at least 3x3");
    let mut r = rng::stream(seed, &[FIXTURE_STREAM]);
    let (w, h) = (width as f64, height as f64);
    let scale = w.min(h);

    let top = colour(&mut r, 100.0, 155.0);
    let bottom = colour(&mut r, 100.0, 155.0);
    let angle: f64 = r.random_range(0.0..std::f64::consts::TAU);
    let (ga, gb) = (angle.cos(), angle.sin());

    let n_shapes = ((w * h) / SHAPE_AREA).ceil().clamp(4.0, 120.0) as usize;
    let mut shapes = Vec::with_capacity(n_shapes);
    for _ in 0..n_shapes {
        let kind = r.random_range(0..3);
        let x = r.random_range(0.0..w);
        let y = r.random_range(0.0..h);
        let size = r.random_range(0.03..0.18) * scale + 3.0;
        let shape = match kind {
            0 => Shape::Disc { cx: x, cy: y, r: size / 2.0 },
            1 => Shape::Rect {
                x0: x,
                y0: y,
                x1: x + size * r.random_range(0.5..1.5),
                y1: y + size * r.random_range(0.5..1.5),
            },
            _ => {
                let a: f64 = r.random_range(0.0..std::f64::consts::TAU);
                Shape::Stroke {
                    x0: x,
                    y0: y,
                    x1: x + 1.5 * size * a.cos(),
                    y1: y + 1.5 * size * a.sin(),
                    half_width: r.random_range(1.6..2.6),
                }
            }
        };
        let sign = if r.random_bool(0.5) { 1.0 } else { -1.0 };
        let shift = sign * r.random_range(SHIFT_MIN..SHIFT_MAX);
        let tint = colour(&mut r, -4.0, 4.0);
        shapes.push((shape, [shift + tint[0], shift + tint[1], shift + tint[2]]));
    }

    let tex = (
        r.random_range(0.0..w),
        r.random_range(0.0..h),
        r.random_range(0.15..0.3) * scale,
        r.random_range(0.25..0.6),
    );
    let ramp_rows = (height / 10).max(1);
    let ramp_start = height - ramp_rows;

    let mut pixels = Vec::with_capacity(width * height * 3);
    for yi in 0..height {
        for xi in 0..width {
            if yi >= ramp_start {
                let v = (255.0 * xi as f64 / (width - 1) as f64).round() as u8;
                pixels.extend_from_slice(&[v, v, v]);
                continue;
            }
            let (x, y) = (xi as f64 + 0.5, yi as f64 + 0.5);
            let t = (((x / w - 0.5) * ga + (y / h - 0.5) * gb) + 0.5).clamp(0.0, 1.0);
            let mut px = [0.0; 3];
            for c in 0..3 {
                px[c] = top[c] + (bottom[c] - top[c]) * t;
            }
            // Later shapes cover earlier ones.
            if let Some((_, delta)) = shapes.iter().rev().find(|(s, _)| s.contains(x, y)) {
                for c in 0..3 {
                    px[c] += delta[c];
                }
            }
            let (tx, ty, tr, freq) = tex;
            let d2 = (x - tx).powi(2) + (y - ty).powi(2);
            if d2 < tr * tr {
                let wave = 10.0 * (freq * x).sin() * (freq * 0.7 * y).cos();
                for p in &mut px {
                    *p += wave;
                }
            }
            pixels.extend(px.iter().map(|v| v.round().clamp(0.0, 255.0) as u8));
        }
    }
    RgbImage::new(width, height, pixels).expect("fixture dimensions are valid")
}

/// `count` scenes with seeds `0..count`.
pub fn suite(count: usize, width: usize, height: usize) -> Vec<RgbImage> {
    (0..count as u64).map(|s| detail_scene(s, width, height)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenes_are_deterministic_and_distinct() {
        let a = detail_scene(3, 64, 40);
        assert_eq!(a, detail_scene(3, 64, 40));
        assert_ne!(a, detail_scene(4, 64, 40));
        assert_eq!((a.width(), a.height()), (64, 40));
    }

    #[test]
    fn ramp_covers_the_exposure_margins() {
        let img = detail_scene(0, 128, 128);
        let row = 127;
        let values: Vec<u8> = (0..128).map(|x| img.pixel(x, row)[0]).collect();
        assert!(values.iter().any(|v| (30..=42).contains(v)));
        assert!(values.iter().any(|v| (219..=225).contains(v)));
    }
}

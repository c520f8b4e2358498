//! Brute-force reference implementations used to cross-check the crate.
//!
//! Everything here favours the most literal formulation over speed: direct
//! window sums with clamped coordinates, an O(N⁴) DFT, a fixpoint hysteresis.

#![allow(dead_code)]

use mmiqa::{GrayImage, RgbImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rgb(r: &mut ChaCha8Rng, max_side: usize) -> RgbImage {
    let w = r.random_range(3..=max_side);
    let h = r.random_range(3..=max_side);
    let px: Vec<u8> = (0..w * h * 3).map(|_| r.random()).collect();
    RgbImage::new(w, h, px).unwrap()
}

fn clamp(i: isize, n: usize) -> usize {
    i.clamp(0, n as isize - 1) as usize
}

pub fn gray(img: &RgbImage) -> Vec<u8> {
    img.pixels()
        .chunks_exact(3)
        .map(|p| ((299 * p[0] as u32 + 587 * p[1] as u32 + 114 * p[2] as u32 + 500) / 1000) as u8)
        .collect()
}

pub fn dark(img: &RgbImage) -> Vec<u8> {
    img.pixels()
        .chunks_exact(3)
        .map(|p| p[0].min(p[1]).min(p[2]))
        .collect()
}

pub fn correlate_int(y: &[u8], w: usize, h: usize, k: [[i64; 3]; 3]) -> Vec<i64> {
    let mut out = vec![0; w * h];
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0;
            for dy in -1..=1isize {
                for dx in -1..=1isize {
                    let v = y[clamp(r as isize + dy, h) * w + clamp(c as isize + dx, w)] as i64;
                    acc += k[(dy + 1) as usize][(dx + 1) as usize] * v;
                }
            }
            out[r * w + c] = acc;
        }
    }
    out
}

pub const LAPLACIAN: [[i64; 3]; 3] = [[0, 1, 0], [1, -4, 1], [0, 1, 0]];
pub const SOBEL_X: [[i64; 3]; 3] = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]];
pub const SOBEL_Y: [[i64; 3]; 3] = [[-1, -2, -1], [0, 0, 0], [1, 2, 1]];

pub fn median3(y: &[u8], w: usize, h: usize) -> Vec<u8> {
    let mut out = vec![0; w * h];
    for r in 0..h {
        for c in 0..w {
            let mut win = Vec::with_capacity(9);
            for dy in -1..=1isize {
                for dx in -1..=1isize {
                    win.push(y[clamp(r as isize + dy, h) * w + clamp(c as isize + dx, w)]);
                }
            }
            win.sort_unstable();
            out[r * w + c] = win[4];
        }
    }
    out
}

pub fn erode(y: &[u8], w: usize, h: usize, side: usize) -> Vec<u8> {
    let rad = (side / 2) as isize;
    let mut out = vec![0; w * h];
    for r in 0..h {
        for c in 0..w {
            let mut m = u8::MAX;
            for dy in -rad..=rad {
                for dx in -rad..=rad {
                    m = m.min(y[clamp(r as isize + dy, h) * w + clamp(c as isize + dx, w)]);
                }
            }
            out[r * w + c] = m;
        }
    }
    out
}

pub fn histogram(y: &[u8]) -> [u64; 256] {
    std::array::from_fn(|v| y.iter().filter(|&&p| p as usize == v).count() as u64)
}

/// Row-major magnitudes, index `v * w + u`.
pub fn dft_magnitude(y: &[u8], w: usize, h: usize) -> Vec<f64> {
    let mut out = vec![0.0; w * h];
    for v in 0..h {
        for u in 0..w {
            let (mut re, mut im) = (0.0, 0.0);
            for r in 0..h {
                for c in 0..w {
                    let phase = -2.0
                        * std::f64::consts::PI
                        * ((u * c) as f64 / w as f64 + (v * r) as f64 / h as f64);
                    re += y[r * w + c] as f64 * phase.cos();
                    im += y[r * w + c] as f64 * phase.sin();
                }
            }
            out[v * w + u] = (re * re + im * im).sqrt();
        }
    }
    out
}

pub fn lap_var(y: &[u8], w: usize, h: usize) -> f64 {
    let l = correlate_int(y, w, h, LAPLACIAN);
    let n = l.len() as i128;
    let s: i128 = l.iter().map(|&v| v as i128).sum();
    let s2: i128 = l.iter().map(|&v| (v as i128) * (v as i128)).sum();
    (n * s2 - s * s) as f64 / (n * (n - 1)) as f64
}

pub fn tenengrad(y: &[u8], w: usize, h: usize) -> f64 {
    let gx = correlate_int(y, w, h, SOBEL_X);
    let gy = correlate_int(y, w, h, SOBEL_Y);
    let s: i64 = gx.iter().zip(&gy).map(|(a, b)| a * a + b * b).sum();
    s as f64 / (w * h) as f64
}

pub fn fft_energy(y: &[u8], w: usize, h: usize) -> f64 {
    dft_magnitude(y, w, h).iter().map(|m| (1.0 + m).ln()).sum::<f64>() / (w * h) as f64
}

pub fn noise(y: &[u8], w: usize, h: usize) -> f64 {
    let m = median3(y, w, h);
    let ss: i64 = y
        .iter()
        .zip(&m)
        .map(|(&a, &b)| (a as i64 - b as i64).pow(2))
        .sum();
    (ss as f64 / (w * h) as f64).sqrt()
}

pub fn exposure(y: &[u8], t_under: u8, t_over: u8) -> (f64, f64) {
    let n = y.len() as f64;
    let u = y.iter().filter(|&&v| v < t_under).count() as f64;
    let o = y.iter().filter(|&&v| v > t_over).count() as f64;
    (100.0 * u / n, 100.0 * o / n)
}

pub fn haze(img: &RgbImage, side: usize) -> f64 {
    let e = erode(&dark(img), img.width(), img.height(), side);
    e.iter().map(|&v| v as f64).sum::<f64>() / e.len() as f64
}

/// Canny with a non-separable 5x5 Gaussian, angle-binned suppression and
/// fixpoint hysteresis.
pub fn canny(y: &[u8], w: usize, h: usize, low: f64, high: f64) -> Vec<bool> {
    let g1: Vec<f64> = (-2..=2).map(|d: i32| (-(d * d) as f64 / 2.0).exp()).collect();
    let norm: f64 = g1.iter().sum();
    let mut smooth = vec![0.0; w * h];
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for dy in -2..=2isize {
                for dx in -2..=2isize {
                    let k = g1[(dy + 2) as usize] * g1[(dx + 2) as usize] / (norm * norm);
                    acc += k * y[clamp(r as isize + dy, h) * w + clamp(c as isize + dx, w)] as f64;
                }
            }
            smooth[r * w + c] = acc;
        }
    }
    let at = |img: &[f64], c: isize, r: isize| img[clamp(r, h) * w + clamp(c, w)];
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for r in 0..h as isize {
        for c in 0..w as isize {
            let mut sx = 0.0;
            let mut sy = 0.0;
            for dy in -1..=1isize {
                for dx in -1..=1isize {
                    let v = at(&smooth, c + dx, r + dy);
                    sx += SOBEL_X[(dy + 1) as usize][(dx + 1) as usize] as f64 * v;
                    sy += SOBEL_Y[(dy + 1) as usize][(dx + 1) as usize] as f64 * v;
                }
            }
            gx[r as usize * w + c as usize] = sx;
            gy[r as usize * w + c as usize] = sy;
        }
    }
    let mag: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| (a * a + b * b).sqrt()).collect();

    let mut thin = vec![0.0; w * h];
    for r in 0..h as isize {
        for c in 0..w as isize {
            let i = r as usize * w + c as usize;
            let m = mag[i];
            if m <= low {
                continue;
            }
            let mut angle = gy[i].atan2(gx[i]).to_degrees();
            if angle < 0.0 {
                angle += 180.0;
            }
            let (before, after) = if angle <= 22.5 || angle >= 157.5 {
                ((c - 1, r), (c + 1, r))
            } else if (67.5..=112.5).contains(&angle) {
                ((c, r - 1), (c, r + 1))
            } else if angle < 67.5 {
                ((c - 1, r - 1), (c + 1, r + 1))
            } else {
                ((c + 1, r - 1), (c - 1, r + 1))
            };
            if m > at(&mag, before.0, before.1) && m >= at(&mag, after.0, after.1) {
                thin[i] = m;
            }
        }
    }

    let mut edges: Vec<bool> = thin.iter().map(|&m| m > high).collect();
    loop {
        let mut changed = false;
        for r in 0..h as isize {
            for c in 0..w as isize {
                let i = r as usize * w + c as usize;
                if edges[i] || thin[i] <= low {
                    continue;
                }
                let linked = (-1..=1).any(|dy: isize| {
                    (-1..=1).any(|dx: isize| {
                        let (nr, nc) = (r + dy, c + dx);
                        nr >= 0
                            && nc >= 0
                            && nr < h as isize
                            && nc < w as isize
                            && edges[nr as usize * w + nc as usize]
                    })
                });
                if linked {
                    edges[i] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return edges;
        }
    }
}

pub fn edge_density(y: &[u8], w: usize, h: usize) -> f64 {
    canny(y, w, h, 100.0, 200.0).iter().filter(|&&e| e).count() as f64 / (w * h) as f64
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn gray_image(img: &RgbImage) -> GrayImage {
    GrayImage::new(img.width(), img.height(), gray(img)).unwrap()
}

/// Low-frequency random image: a few random cosine waves plus mild noise,
/// so edge maps contain both strong and weak responses.
pub fn random_smooth(r: &mut ChaCha8Rng, max_side: usize) -> RgbImage {
    let w = r.random_range(3..=max_side);
    let h = r.random_range(3..=max_side);
    let waves: Vec<(f64, f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                r.random_range(0.1..1.2),
                r.random_range(0.1..1.2),
                r.random_range(0.0..6.3),
                r.random_range(10.0..60.0),
            )
        })
        .collect();
    let mut px = Vec::with_capacity(w * h * 3);
    for y in 0..h {
        for x in 0..w {
            let base: f64 = 128.0
                + waves
                    .iter()
                    .map(|(fx, fy, ph, a)| a * (fx * x as f64 + fy * y as f64 + ph).cos())
                    .sum::<f64>();
            for _ in 0..3 {
                let v = base + r.random_range(-6.0..6.0);
                px.push(v.round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    RgbImage::new(w, h, px).unwrap()
}

/// Every disagreement between the crate and the oracles on `img`.
pub fn oracle_mismatches(img: &RgbImage) -> Vec<String> {
    use mmiqa::cues::{self, CannyParams, ExposureThresholds};
    use mmiqa::imgops::{self, Kernel3};

    let (w, h) = (img.width(), img.height());
    let y = gray(img);
    let g = imgops::to_grayscale(img);
    let mut bad = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            bad.push(format!("{name} ({w}x{h})"));
        }
    };

    check("to_grayscale", g.pixels() == y.as_slice());
    for (name, k, kk) in [
        ("laplacian", Kernel3::LAPLACIAN, LAPLACIAN),
        ("sobel_x", Kernel3::SOBEL_X, SOBEL_X),
        ("sobel_y", Kernel3::SOBEL_Y, SOBEL_Y),
    ] {
        let got = imgops::convolve3(&g, &k).unwrap();
        let want = correlate_int(&y, w, h, kk);
        check(name, got.values().iter().zip(&want).all(|(a, &b)| *a == b as f64));
    }
    check("median3", imgops::median3(&g).unwrap().pixels() == median3(&y, w, h).as_slice());
    for side in [1, 3, 5, 15] {
        check(
            &format!("erode{side}"),
            imgops::erode(&g, side).unwrap().pixels() == erode(&y, w, h, side).as_slice(),
        );
    }
    check("histogram256", imgops::histogram256(&g) == histogram(&y));
    let mag = imgops::dft_magnitude(&g);
    let want = dft_magnitude(&y, w, h);
    check(
        "dft_magnitude",
        mag.values().iter().zip(&want).all(|(a, b)| rel_close(*a, *b, 1e-9)),
    );

    check("laplacian_variance", rel_close(cues::laplacian_variance(&g).unwrap(), lap_var(&y, w, h), 1e-9));
    check("tenengrad", rel_close(cues::tenengrad(&g).unwrap(), tenengrad(&y, w, h), 1e-9));
    check("fft_energy", rel_close(cues::fft_energy(&g), fft_energy(&y, w, h), 1e-9));
    check("noise_estimate", rel_close(cues::noise_estimate(&g).unwrap(), noise(&y, w, h), 1e-9));
    check(
        "edge_density",
        cues::edge_density(&g, &CannyParams::default()).unwrap() == edge_density(&y, w, h),
    );
    let t = ExposureThresholds::default();
    check("exposure_tails", cues::exposure_tails(&g, &t) == exposure(&y, t.t_under, t.t_over));
    check("haze_proxy", rel_close(cues::haze_proxy(img, 15).unwrap(), haze(img, 15), 1e-12));
    bad
}

/// The fixed 50-image oracle set: alternating noise and smooth images.
pub fn oracle_images() -> Vec<RgbImage> {
    let mut r = rng(0x0AC1E);
    (0..50)
        .map(|i| if i % 2 == 0 { random_rgb(&mut r, 16) } else { random_smooth(&mut r, 16) })
        .collect()
}

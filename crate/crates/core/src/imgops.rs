//! Low-level raster primitives shared by every cue extractor.
//!
//! All neighbourhood operations (3x3 correlation, median, erosion) use
//! edge replication at the borders.

use std::collections::VecDeque;

use rustfft::{num_complex::Complex, FftPlanner};

use crate::{Error, Result};

/// Interleaved 8-bit RGB raster, row-major, at least 3x3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width < 3 || height < 3 {
            return Err(Error::ImageTooSmall { width, height });
        }
        let expected = width * height * 3;
        if pixels.len() != expected {
            return Err(Error::BufferSize {
                width,
                height,
                expected,
                got: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        let pixels = rgb
            .iter()
            .copied()
            .cycle()
            .take(width * height * 3)
            .collect();
        Self::new(width, height, pixels)
    }

    /// Builds an image from RGBA bytes, dropping alpha.
    pub fn from_rgba(width: usize, height: usize, rgba: &[u8]) -> Result<Self> {
        if rgba.len() != width * height * 4 {
            return Err(Error::BufferSize {
                width,
                height,
                expected: width * height * 4,
                got: rgba.len(),
            });
        }
        let pixels = rgba.chunks_exact(4).flat_map(|p| [p[0], p[1], p[2]]).collect();
        Self::new(width, height, pixels)
    }

    pub fn to_rgba(&self) -> Vec<u8> {
        self.pixels
            .chunks_exact(3)
            .flat_map(|p| [p[0], p[1], p[2], 255])
            .collect()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    /// Applies `f` to every channel value; dimensions are unchanged.
    pub fn map_channels(&self, mut f: impl FnMut(u8) -> u8) -> Self {
        Self {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Splits into three planar channels.
    pub fn planes(&self) -> [Vec<u8>; 3] {
        let n = self.width * self.height;
        let mut out = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
        for p in self.pixels.chunks_exact(3) {
            out[0].push(p[0]);
            out[1].push(p[1]);
            out[2].push(p[2]);
        }
        out
    }

    pub(crate) fn from_planes(width: usize, height: usize, planes: [Vec<u8>; 3]) -> Result<Self> {
        let pixels = (0..width * height)
            .flat_map(|i| [planes[0][i], planes[1][i], planes[2][i]])
            .collect();
        Self::new(width, height, pixels)
    }
}

/// Single-channel 8-bit raster, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::BufferSize {
                width,
                height,
                expected: width * height,
                got: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    fn require_3x3(&self) -> Result<()> {
        if self.width < 3 || self.height < 3 {
            return Err(Error::ImageTooSmall {
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }
}

/// Real-valued raster (filter responses, spectra).
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl RealMatrix {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::BufferSize {
                width,
                height,
                expected: width * height,
                got: values.len(),
            });
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }
}

/// 3x3 correlation kernel, indexed `[row][column]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kernel3([[f64; 3]; 3]);

impl Kernel3 {
    /// Four-neighbour Laplacian.
    pub const LAPLACIAN: Self = Self([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]]);
    /// Horizontal-derivative Sobel kernel.
    pub const SOBEL_X: Self = Self([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]]);
    /// Vertical-derivative Sobel kernel (transpose of `SOBEL_X`).
    pub const SOBEL_Y: Self = Self([[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]]);

    pub fn new(coefficients: [[f64; 3]; 3]) -> Result<Self> {
        if coefficients.iter().flatten().all(|c| c.is_finite()) {
            Ok(Self(coefficients))
        } else {
            Err(Error::NonFiniteKernel)
        }
    }

    pub fn coefficients(&self) -> &[[f64; 3]; 3] {
        &self.0
    }
}

#[inline]
fn clamp_index(i: isize, len: usize) -> usize {
    i.clamp(0, len as isize - 1) as usize
}

/// BT.601 luma, `round(0.299 R + 0.587 G + 0.114 B)` with halves rounded up.
///
/// Computed in integer thousandths so the rounding is exact.
pub fn to_grayscale(img: &RgbImage) -> GrayImage {
    let pixels = img
        .pixels
        .chunks_exact(3)
        .map(|p| {
            let acc = 299 * u32::from(p[0]) + 587 * u32::from(p[1]) + 114 * u32::from(p[2]);
            ((acc + 500) / 1000).min(255) as u8
        })
        .collect();
    GrayImage {
        width: img.width,
        height: img.height,
        pixels,
    }
}

/// Per-pixel minimum over R, G and B.
pub fn dark_channel(img: &RgbImage) -> GrayImage {
    let pixels = img
        .pixels
        .chunks_exact(3)
        .map(|p| p[0].min(p[1]).min(p[2]))
        .collect();
    GrayImage {
        width: img.width,
        height: img.height,
        pixels,
    }
}

/// Same-size 3x3 correlation (no kernel flip) with replicated borders.
pub fn convolve3(img: &GrayImage, kernel: &Kernel3) -> Result<RealMatrix> {
    img.require_3x3()?;
    let values: Vec<f64> = img.pixels.iter().map(|&v| f64::from(v)).collect();
    Ok(correlate3_real(&values, img.width, img.height, kernel))
}

pub(crate) fn correlate3_real(src: &[f64], width: usize, height: usize, k: &Kernel3) -> RealMatrix {
    let k = &k.0;
    let mut out = vec![0.0; width * height];
    for y in 0..height {
        let rows = [
            clamp_index(y as isize - 1, height) * width,
            y * width,
            clamp_index(y as isize + 1, height) * width,
        ];
        for x in 0..width {
            let cols = [
                clamp_index(x as isize - 1, width),
                x,
                clamp_index(x as isize + 1, width),
            ];
            let mut acc = 0.0;
            for (j, &row) in rows.iter().enumerate() {
                for (i, &col) in cols.iter().enumerate() {
                    acc += k[j][i] * src[row + col];
                }
            }
            out[y * width + x] = acc;
        }
    }
    RealMatrix {
        width,
        height,
        values: out,
    }
}

/// 3x3 median filter with replicated borders.
pub fn median3(img: &GrayImage) -> Result<GrayImage> {
    img.require_3x3()?;
    let (w, h) = (img.width, img.height);
    let mut out = Vec::with_capacity(w * h);
    let mut window = [0u8; 9];
    for y in 0..h {
        let rows = [
            clamp_index(y as isize - 1, h) * w,
            y * w,
            clamp_index(y as isize + 1, h) * w,
        ];
        for x in 0..w {
            let cols = [clamp_index(x as isize - 1, w), x, clamp_index(x as isize + 1, w)];
            let mut n = 0;
            for &row in &rows {
                for &col in &cols {
                    window[n] = img.pixels[row + col];
                    n += 1;
                }
            }
            let (_, median, _) = window.select_nth_unstable(4);
            out.push(*median);
        }
    }
    Ok(GrayImage {
        width: w,
        height: h,
        pixels: out,
    })
}

/// Grayscale erosion with a `side x side` square, replicated borders.
///
/// The square window is separable, so this runs a sliding minimum along
/// rows and then along columns, O(1) amortized per pixel.
pub fn erode(img: &GrayImage, side: usize) -> Result<GrayImage> {
    if side == 0 || side.is_multiple_of(2) {
        return Err(Error::EvenStructuringElement(side));
    }
    if side == 1 || img.is_empty() {
        return Ok(img.clone());
    }
    let (w, h) = (img.width, img.height);
    let radius = side / 2;
    let mut tmp = vec![0u8; w * h];
    let mut line = Vec::with_capacity(w.max(h));
    let mut mins = Vec::with_capacity(w.max(h));
    for y in 0..h {
        line.clear();
        line.extend_from_slice(&img.pixels[y * w..(y + 1) * w]);
        sliding_min(&line, radius, &mut mins);
        tmp[y * w..(y + 1) * w].copy_from_slice(&mins);
    }
    let mut out = vec![0u8; w * h];
    for x in 0..w {
        line.clear();
        line.extend((0..h).map(|y| tmp[y * w + x]));
        sliding_min(&line, radius, &mut mins);
        for (y, &v) in mins.iter().enumerate() {
            out[y * w + x] = v;
        }
    }
    Ok(GrayImage {
        width: w,
        height: h,
        pixels: out,
    })
}

/// Minimum over `[i - radius, i + radius]` for every `i`, with clamped ends.
fn sliding_min(line: &[u8], radius: usize, out: &mut Vec<u8>) {
    let n = line.len() as isize;
    let r = radius as isize;
    let at = |i: isize| line[i.clamp(0, n - 1) as usize];
    out.clear();
    // Monotone deque of padded positions whose values increase front to back.
    let mut deque: VecDeque<isize> = VecDeque::with_capacity(2 * radius + 1);
    for p in -r..n + r {
        let v = at(p);
        while deque.back().is_some_and(|&q| at(q) >= v) {
            deque.pop_back();
        }
        deque.push_back(p);
        let centre = p - r;
        if centre >= 0 {
            while deque.front().is_some_and(|&q| q < centre - r) {
                deque.pop_front();
            }
            out.push(at(deque[0]));
        }
    }
}

/// Occurrence count of each 8-bit level.
pub fn histogram256(img: &GrayImage) -> [u64; 256] {
    let mut counts = [0u64; 256];
    for &v in &img.pixels {
        counts[v as usize] += 1;
    }
    counts
}

/// Unnormalized 2-D DFT of the raw intensities at native size.
///
/// Returns a row-major matrix of complex coefficients; `(u, v)` with `u`
/// along the width. No windowing, padding or centering shift.
pub(crate) fn dft2(img: &GrayImage) -> Vec<Complex<f64>> {
    let (w, h) = (img.width, img.height);
    let mut data: Vec<Complex<f64>> = img
        .pixels
        .iter()
        .map(|&v| Complex::new(f64::from(v), 0.0))
        .collect();
    if data.is_empty() {
        return data;
    }
    let mut planner = FftPlanner::<f64>::new();
    let row_fft = planner.plan_fft_forward(w);
    row_fft.process(&mut data);

    let col_fft = planner.plan_fft_forward(h);
    // Transform columns in blocks to keep gathers cache friendly.
    const BLOCK: usize = 16;
    let mut scratch = vec![Complex::new(0.0, 0.0); h * BLOCK];
    let mut x0 = 0;
    while x0 < w {
        let cols = BLOCK.min(w - x0);
        for c in 0..cols {
            for y in 0..h {
                scratch[c * h + y] = data[y * w + x0 + c];
            }
        }
        col_fft.process(&mut scratch[..cols * h]);
        for c in 0..cols {
            for y in 0..h {
                data[y * w + x0 + c] = scratch[c * h + y];
            }
        }
        x0 += cols;
    }
    data
}

/// Coefficient-wise modulus of the unnormalized 2-D DFT.
pub fn dft_magnitude(img: &GrayImage) -> RealMatrix {
    let values = dft2(img).into_iter().map(|c| c.norm()).collect();
    RealMatrix {
        width: img.width,
        height: img.height,
        values,
    }
}

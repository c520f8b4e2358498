use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use mmiqa::batch::map_ordered;
use mmiqa::io::{has_image_extension, load_rgb, resize};
use mmiqa::score::{score_image, FusionConfig, QualityBreakdown};
use serde::{Deserialize, Serialize};

use crate::args::Format;
use crate::{output, usage, Outcome};

pub struct Options {
    pub resize: Option<(usize, usize)>,
    pub timing: bool,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub path: String,
    pub lap_var: f64,
    pub tenengrad: f64,
    pub edge_density: f64,
    pub fft_energy: f64,
    pub noise: f64,
    pub under_pct: f64,
    pub over_pct: f64,
    pub haze: f64,
    pub blur_pct: f64,
    pub lowres_pct: f64,
    pub q_blur: f64,
    pub q_lowres: f64,
    pub q_noise: f64,
    pub q_under: f64,
    pub q_over: f64,
    pub q_haze: f64,
    pub q_edge: f64,
    pub q_fft: f64,
    pub q_total: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl ScoreRow {
    fn new(path: &Path, b: &QualityBreakdown, elapsed_ms: Option<f64>) -> Self {
        let c = &b.cues;
        let [q_blur, q_lowres, q_noise, q_under, q_over, q_haze, q_edge, q_fft] = b.q_terms;
        Self {
            path: path.display().to_string(),
            lap_var: c.lap_var,
            tenengrad: c.tenengrad,
            edge_density: c.edge_density,
            fft_energy: c.fft_energy,
            noise: c.noise,
            under_pct: c.under_pct,
            over_pct: c.over_pct,
            haze: c.haze,
            blur_pct: b.composites.blur_pct,
            lowres_pct: b.composites.lowres_pct,
            q_blur,
            q_lowres,
            q_noise,
            q_under,
            q_over,
            q_haze,
            q_edge,
            q_fft,
            q_total: b.q_total,
            elapsed_ms,
        }
    }
}

/// Input files in path order; directories contribute their image files.
fn collect_inputs(inputs: &[PathBuf]) -> anyhow::Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for input in inputs {
        if input.is_dir() {
            for entry in fs::read_dir(input).with_context(|| format!("reading {}", input.display()))? {
                let p = entry?.path();
                if p.is_file() && has_image_extension(&p) {
                    paths.push(p);
                }
            }
        } else {
            paths.push(input.clone());
        }
    }
    paths.sort();
    paths.dedup();
    Ok(paths)
}

fn score_file(path: &Path, cfg: &FusionConfig, opts: &Options) -> mmiqa::Result<ScoreRow> {
    let start = Instant::now();
    let mut img = load_rgb(path)?;
    if let Some((w, h)) = opts.resize {
        img = resize(&img, w, h)?;
    }
    let b = score_image(&img, cfg)?;
    let elapsed = opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    Ok(ScoreRow::new(path, &b, elapsed))
}

pub fn run(
    inputs: &[PathBuf],
    cfg: &FusionConfig,
    opts: &Options,
    format: Format,
    out: Option<&Path>,
) -> anyhow::Result<Outcome> {
    let paths = collect_inputs(inputs)?;
    if paths.is_empty() {
        return Err(usage(anyhow::anyhow!("no input images")));
    }
    let start = Instant::now();
    let results = map_ordered(&paths, opts.workers, |_, p| score_file(p, cfg, opts))?;

    let mut rows = Vec::with_capacity(results.len());
    let mut failed = 0;
    for (path, result) in paths.iter().zip(results) {
        match result {
            Ok(row) => rows.push(row),
            Err(e) => {
                failed += 1;
                log::error!("{}: {e}", path.display());
            }
        }
    }
    log::info!(
        "scored {} of {} images in {:.2} s",
        rows.len(),
        paths.len(),
        start.elapsed().as_secs_f64()
    );
    match format {
        Format::Csv => output::write_csv(out, &rows)?,
        Format::Json => output::write_json(out, &rows)?,
    }
    Ok(if failed == 0 { Outcome::Complete } else { Outcome::Partial })
}

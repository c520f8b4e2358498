use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{distortion_seed, DistortionSpec, Family};
use crate::io::{has_image_extension, load_rgb, save_png};
use crate::{rng, Error, Result};

pub const MANIFEST_FILE: &str = "manifest.csv";

/// Fixed severity per family, replacing the random draw.
pub type LevelOverrides = BTreeMap<Family, f64>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub clean_path: PathBuf,
    pub distorted_path: PathBuf,
    pub family: Family,
    pub level: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorpusManifest {
    pub records: Vec<CorpusRecord>,
}

impl CorpusManifest {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
        for r in &self.records {
            w.serialize(r).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let mut r = csv::Reader::from_path(path).map_err(csv_error)?;
        let mut records = Vec::new();
        for (i, row) in r.deserialize().enumerate() {
            records.push(row.map_err(|e| Error::Parse {
                line: i + 2,
                message: e.to_string(),
            })?);
        }
        Ok(Self { records })
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse {
            line: 0,
            message: format!("{other:?}"),
        },
    }
}

fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && has_image_extension(p))
        .collect();
    paths.sort();
    Ok(paths)
}

/// Output file stem per input, disambiguating inputs that share a stem.
fn output_stems(paths: &[PathBuf]) -> Vec<String> {
    let stem = |p: &PathBuf| p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    let mut counts: HashMap<String, usize> = HashMap::new();
    for p in paths {
        *counts.entry(stem(p)).or_default() += 1;
    }
    paths
        .iter()
        .map(|p| {
            let s = stem(p);
            if counts[&s] > 1 {
                let ext = p.extension().unwrap_or_default().to_string_lossy();
                format!("{s}_{ext}")
            } else {
                s
            }
        })
        .collect()
}

fn plan_image(
    index: usize,
    seed: u64,
    overrides: &LevelOverrides,
) -> Vec<DistortionSpec> {
    Family::ALL
        .iter()
        .map(|&family| {
            let family_seed = distortion_seed(seed, index as u64, family);
            let level = overrides.get(&family).copied().unwrap_or_else(|| {
                let levels = family.levels();
                let mut r = rng::stream(family_seed, &[0]);
                levels[r.random_range(0..levels.len())]
            });
            DistortionSpec::new(family, level, family_seed)
        })
        .collect()
}

fn process_image(
    clean: &Path,
    stem: &str,
    out_dir: &Path,
    specs: &[DistortionSpec],
) -> Result<Vec<CorpusRecord>> {
    let img = load_rgb(clean)?;
    specs
        .iter()
        .map(|spec| {
            let distorted = spec.apply(&img)?;
            let path = out_dir.join(spec.family.name()).join(format!("{stem}.png"));
            save_png(&distorted, &path)?;
            Ok(CorpusRecord {
                clean_path: clean.to_path_buf(),
                distorted_path: path,
                family: spec.family,
                level: spec.level,
                seed: spec.rng_seed,
            })
        })
        .collect()
}

/// Writes one distorted PNG per family for every clean image, plus
/// `manifest.csv` in `out_dir`.
///
/// Levels are drawn from [`Family::levels`] with a stream derived from
/// `(seed, image index, family)`, so results do not depend on the order
/// in which images are processed.
pub fn build_corpus(
    clean_dir: &Path,
    out_dir: &Path,
    seed: u64,
    strict_levels: bool,
    overrides: &LevelOverrides,
) -> Result<CorpusManifest> {
    for (&family, &level) in overrides {
        DistortionSpec::new(family, level, 0).validate(strict_levels)?;
    }
    let inputs = list_images(clean_dir)?;
    if inputs.is_empty() {
        return Err(Error::EmptyInput);
    }
    for family in Family::ALL {
        fs::create_dir_all(out_dir.join(family.name()))?;
    }
    let stems = output_stems(&inputs);
    let work = |i: usize| -> Result<Vec<CorpusRecord>> {
        let specs = plan_image(i, seed, overrides);
        process_image(&inputs[i], &stems[i], out_dir, &specs)
    };

    #[cfg(feature = "parallel")]
    let per_image: Vec<Result<Vec<CorpusRecord>>> = {
        use rayon::prelude::*;
        (0..inputs.len()).into_par_iter().map(work).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_image: Vec<Result<Vec<CorpusRecord>>> = (0..inputs.len()).map(work).collect();

    let mut records = Vec::with_capacity(inputs.len() * Family::ALL.len());
    for r in per_image {
        records.extend(r?);
    }
    let manifest = CorpusManifest { records };
    manifest.write_csv(&out_dir.join(MANIFEST_FILE))?;
    Ok(manifest)
}

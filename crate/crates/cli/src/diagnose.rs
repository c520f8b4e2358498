use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use mmiqa::batch::map_ordered;
use mmiqa::distort::CorpusManifest;
use mmiqa::eval::{classification_metrics, predict_family, ClassMetrics, ClassificationMetrics, ConfusionTable, DeltaMode};
use mmiqa::io::load_rgb;
use mmiqa::score::{score_image, FusionConfig};
use serde::Serialize;

use crate::args::Format;
use crate::output;

#[derive(Debug, Serialize)]
pub struct MetricsRow {
    pub class: String,
    pub support: u64,
    pub tp: Option<u64>,
    pub fp: Option<u64>,
    #[serde(rename = "fn")]
    pub fn_: Option<u64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub accuracy: Option<f64>,
    pub undefined: Option<u32>,
}

impl From<&ClassMetrics> for MetricsRow {
    fn from(c: &ClassMetrics) -> Self {
        Self {
            class: c.label.clone(),
            support: c.support,
            tp: Some(c.tp),
            fp: Some(c.fp),
            fn_: Some(c.fn_),
            precision: Some(c.precision),
            recall: Some(c.recall),
            f1: Some(c.f1),
            accuracy: None,
            undefined: Some(c.undefined),
        }
    }
}

/// Per-class rows, then `macro`, `weighted` and `overall` summary rows.
pub fn metric_rows(m: &ClassificationMetrics) -> Vec<MetricsRow> {
    let summary = |class: &str| MetricsRow {
        class: class.to_string(),
        support: m.n,
        tp: None,
        fp: None,
        fn_: None,
        precision: None,
        recall: None,
        f1: None,
        accuracy: None,
        undefined: None,
    };
    let mut rows: Vec<MetricsRow> = m.per_class.iter().chain(&m.unsupported).map(MetricsRow::from).collect();
    rows.push(MetricsRow {
        precision: Some(m.macro_precision),
        recall: Some(m.macro_recall),
        f1: Some(m.macro_f1),
        ..summary("macro")
    });
    rows.push(MetricsRow {
        f1: Some(m.weighted_f1),
        ..summary("weighted")
    });
    rows.push(MetricsRow {
        accuracy: Some(m.accuracy),
        ..summary("overall")
    });
    rows
}

#[derive(Serialize)]
struct Report<'a> {
    delta_mode: String,
    #[serde(flatten)]
    metrics: &'a ClassificationMetrics,
}

/// Manifest paths are taken as written, falling back to the manifest's
/// directory for relative paths that do not resolve.
fn resolve(path: &Path, base: &Path) -> PathBuf {
    if path.is_relative() && !path.exists() {
        let candidate = base.join(path);
        if candidate.exists() {
            return candidate;
        }
    }
    path.to_path_buf()
}

pub fn run(
    manifest_path: &Path,
    cfg: &FusionConfig,
    mode: DeltaMode,
    workers: usize,
    format: Format,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let manifest = CorpusManifest::read_csv(manifest_path)?;
    if manifest.records.is_empty() {
        return Err(mmiqa::Error::EmptyInput).with_context(|| format!("{} lists no images", manifest_path.display()));
    }
    let base = manifest_path.parent().unwrap_or(Path::new("."));

    // Each distinct image is scored once; clean images recur per family.
    let mut unique: BTreeMap<PathBuf, usize> = BTreeMap::new();
    for r in &manifest.records {
        for p in [&r.clean_path, &r.distorted_path] {
            let next = unique.len();
            unique.entry(resolve(p, base)).or_insert(next);
        }
    }
    let mut paths = vec![PathBuf::new(); unique.len()];
    for (p, &i) in &unique {
        paths[i] = p.clone();
    }
    let scored = map_ordered(&paths, workers, |_, p| load_rgb(p).and_then(|img| score_image(&img, cfg)))?;
    let mut breakdowns = Vec::with_capacity(scored.len());
    for (p, s) in paths.iter().zip(scored) {
        breakdowns.push(s.with_context(|| format!("scoring {}", p.display()))?);
    }

    let mut table = ConfusionTable::for_families();
    for r in &manifest.records {
        let clean = &breakdowns[unique[&resolve(&r.clean_path, base)]];
        let distorted = &breakdowns[unique[&resolve(&r.distorted_path, base)]];
        table.record_family(r.family, predict_family(clean, distorted, r.family, mode, cfg));
    }
    let metrics = classification_metrics(&table);
    log::info!("{} pairs, accuracy {:.4}", metrics.n, metrics.accuracy);
    match format {
        Format::Csv => output::write_csv(out, &metric_rows(&metrics))?,
        Format::Json => output::write_json(
            out,
            &Report {
                delta_mode: mode.to_string(),
                metrics: &metrics,
            },
        )?,
    }
    Ok(())
}

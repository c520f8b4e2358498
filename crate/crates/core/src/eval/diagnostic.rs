use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distort::Family;
use crate::score::{score_image, FusionConfig, QualityBreakdown};
use crate::{Error, Result, RgbImage};

pub const OTHER_LABEL: &str = "Other";

/// How a distorted/clean pair is assigned a predicted class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaMode {
    /// Predict the labeled family when its own cue rose, otherwise `Other`.
    #[default]
    Literal,
    /// Predict the family whose normalized cue rose the most, or `Other`
    /// if none rose. An extension; cue changes are put on a common scale
    /// (percentages over 100, noise and haze over their references).
    Argmax,
}

impl fmt::Display for DeltaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaMode::Literal => "literal",
            DeltaMode::Argmax => "argmax",
        })
    }
}

impl FromStr for DeltaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "literal" => Ok(DeltaMode::Literal),
            "argmax" => Ok(DeltaMode::Argmax),
            _ => Err(Error::BadConfig(format!("unknown delta mode `{s}`"))),
        }
    }
}

/// The cue a family is expected to raise.
pub fn family_cue(family: Family, b: &QualityBreakdown) -> f64 {
    match family {
        Family::Blur => b.composites.blur_pct,
        Family::LowRes => b.composites.lowres_pct,
        Family::Noise => b.cues.noise,
        Family::Haze => b.cues.haze,
        Family::Under => b.cues.under_pct,
        Family::Over => b.cues.over_pct,
    }
}

fn cue_scale(family: Family, cfg: &FusionConfig) -> f64 {
    match family {
        Family::Noise => cfg.ref_noise,
        Family::Haze => cfg.ref_haze,
        _ => 100.0,
    }
}

/// Predicted class for a pair, `None` meaning `Other`.
pub fn predict_family(
    clean: &QualityBreakdown,
    distorted: &QualityBreakdown,
    labeled: Family,
    mode: DeltaMode,
    cfg: &FusionConfig,
) -> Option<Family> {
    let delta = |f: Family| family_cue(f, distorted) - family_cue(f, clean);
    match mode {
        DeltaMode::Literal => (delta(labeled) > 0.0).then_some(labeled),
        DeltaMode::Argmax => {
            let mut best: Option<(Family, f64)> = None;
            for f in Family::ALL {
                let d = delta(f) / cue_scale(f, cfg);
                if d > 0.0 && best.is_none_or(|(_, b)| d > b) {
                    best = Some((f, d));
                }
            }
            best.map(|(f, _)| f)
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ClassCounts {
    /// Samples whose true label is this class.
    pub fn support(&self) -> u64 {
        self.tp + self.fn_
    }
}

/// Per-class TP/FP/FN over a fixed label set that always includes `Other`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionTable {
    pub classes: Vec<(String, ClassCounts)>,
    pub n: u64,
}

impl ConfusionTable {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        let mut classes: Vec<(String, ClassCounts)> = labels
            .into_iter()
            .map(|l| (l.into(), ClassCounts::default()))
            .collect();
        if !classes.iter().any(|(l, _)| l == OTHER_LABEL) {
            classes.push((OTHER_LABEL.to_string(), ClassCounts::default()));
        }
        Self { classes, n: 0 }
    }

    pub fn for_families() -> Self {
        Self::new(Family::ALL.iter().map(|f| f.name()))
    }

    fn slot(&mut self, label: &str) -> &mut ClassCounts {
        let i = match self.classes.iter().position(|(l, _)| l == label) {
            Some(i) => i,
            None => {
                self.classes.push((label.to_string(), ClassCounts::default()));
                self.classes.len() - 1
            }
        };
        &mut self.classes[i].1
    }

    pub fn record(&mut self, actual: &str, predicted: &str) {
        self.n += 1;
        if actual == predicted {
            self.slot(actual).tp += 1;
        } else {
            self.slot(actual).fn_ += 1;
            self.slot(predicted).fp += 1;
        }
    }

    pub fn record_family(&mut self, actual: Family, predicted: Option<Family>) {
        self.record(actual.name(), predicted.map_or(OTHER_LABEL, Family::name));
    }

    pub fn counts(&self, label: &str) -> Option<ClassCounts> {
        self.classes.iter().find(|(l, _)| l == label).map(|(_, c)| *c)
    }
}

/// Scores every pair and tallies predictions against the labeled family.
pub fn delta_diagnostic(
    pairs: &[(RgbImage, RgbImage, Family)],
    cfg: &FusionConfig,
    mode: DeltaMode,
) -> Result<ConfusionTable> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut table = ConfusionTable::for_families();
    for (clean, distorted, family) in pairs {
        let c = score_image(clean, cfg)?;
        let d = score_image(distorted, cfg)?;
        table.record_family(*family, predict_family(&c, &d, *family, mode, cfg));
    }
    Ok(table)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: String,
    pub support: u64,
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// How many of precision, recall and F1 had a zero denominator and
    /// were reported as 0.
    pub undefined: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub weighted_f1: f64,
    pub n: u64,
    /// Per-class rows, in table order, for classes with nonzero support.
    pub per_class: Vec<ClassMetrics>,
    /// Rows for classes that were predicted but never the true label.
    pub unsupported: Vec<ClassMetrics>,
}

fn ratio(num: f64, den: f64, undefined: &mut u32) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        *undefined += 1;
        0.0
    }
}

fn class_metrics(label: &str, c: &ClassCounts) -> ClassMetrics {
    let mut undefined = 0;
    let (tp, fp, fn_) = (c.tp as f64, c.fp as f64, c.fn_ as f64);
    let precision = ratio(tp, tp + fp, &mut undefined);
    let recall = ratio(tp, tp + fn_, &mut undefined);
    let f1 = ratio(2.0 * precision * recall, precision + recall, &mut undefined);
    ClassMetrics {
        label: label.to_string(),
        support: c.support(),
        tp: c.tp,
        fp: c.fp,
        fn_: c.fn_,
        precision,
        recall,
        f1,
        undefined,
    }
}

/// Accuracy, per-class precision/recall/F1, their macro averages and the
/// support-weighted F1.
///
/// Averages run over classes that occur as a true label; `Other` and any
/// other never-true class are listed separately in `unsupported`.
pub fn classification_metrics(t: &ConfusionTable) -> ClassificationMetrics {
    let (per_class, unsupported): (Vec<ClassMetrics>, Vec<ClassMetrics>) = t
        .classes
        .iter()
        .map(|(l, c)| class_metrics(l, c))
        .filter(|m| m.support > 0 || m.fp > 0)
        .partition(|m| m.support > 0);

    let n = t.n;
    let k = per_class.len() as f64;
    let mean = |f: fn(&ClassMetrics) -> f64| {
        if per_class.is_empty() {
            0.0
        } else {
            per_class.iter().map(f).sum::<f64>() / k
        }
    };
    let total_support: f64 = per_class.iter().map(|m| m.support as f64).sum();
    let correct: u64 = per_class.iter().map(|m| m.tp).sum();
    ClassificationMetrics {
        accuracy: if n > 0 { correct as f64 / n as f64 } else { 0.0 },
        macro_precision: mean(|m| m.precision),
        macro_recall: mean(|m| m.recall),
        macro_f1: mean(|m| m.f1),
        weighted_f1: if total_support > 0.0 {
            per_class
                .iter()
                .map(|m| m.support as f64 / total_support * m.f1)
                .sum()
        } else {
            0.0
        },
        n,
        per_class,
        unsupported,
    }
}

//! Plain-text `key = value` form of [`FusionConfig`].
//!
//! ```text
//! # sensitivity run
//! ref_noise = 13.5
//! w_blur = 0.25
//! w_lowres = 0.25
//! ```
//!
//! Blank lines and `#` comments are ignored; keys not present keep their
//! defaults. Unknown or repeated keys are errors.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::score::{FusionConfig, TERM_NAMES};
use crate::{Error, Result};

fn weight_key(i: usize) -> String {
    format!("w_{}", TERM_NAMES[i])
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, raw: &str) -> Result<T> {
    raw.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid value `{raw}` for `{key}`"),
    })
}

pub fn parse_config(text: &str) -> Result<FusionConfig> {
    let mut cfg = FusionConfig::default();
    let mut seen = HashSet::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Parse {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        if let Some(slot) = cfg.reference_mut(key) {
            *slot = parse_value(line, key, value)?;
            continue;
        }
        if let Some(w) = (0..TERM_NAMES.len()).find(|&w| weight_key(w) == key) {
            cfg.weights[w] = parse_value(line, key, value)?;
            continue;
        }
        match key {
            "canny_low" => cfg.canny.t_low = parse_value(line, key, value)?,
            "canny_high" => cfg.canny.t_high = parse_value(line, key, value)?,
            "t_under" => cfg.exposure.t_under = parse_value(line, key, value)?,
            "t_over" => cfg.exposure.t_over = parse_value(line, key, value)?,
            "haze_side" => cfg.haze_side = parse_value(line, key, value)?,
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown key `{key}`"),
                })
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<FusionConfig> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    parse_config(&std::fs::read_to_string(path)?)
}

/// Every key with its current value; [`parse_config`] reads it back exactly.
pub fn dump_config(cfg: &FusionConfig) -> String {
    let mut out = String::new();
    for (name, value) in cfg.references() {
        let _ = writeln!(out, "{name} = {value}");
    }
    for (i, w) in cfg.weights.iter().enumerate() {
        let _ = writeln!(out, "{} = {w}", weight_key(i));
    }
    let _ = writeln!(out, "canny_low = {}", cfg.canny.t_low);
    let _ = writeln!(out, "canny_high = {}", cfg.canny.t_high);
    let _ = writeln!(out, "t_under = {}", cfg.exposure.t_under);
    let _ = writeln!(out, "t_over = {}", cfg.exposure.t_over);
    let _ = writeln!(out, "haze_side = {}", cfg.haze_side);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::score::DEFAULT_WEIGHTS;

    #[test]
    fn empty_text_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, FusionConfig::default());
        assert_eq!(cfg.weights, DEFAULT_WEIGHTS);
        assert_eq!(parse_config("# nothing\n\n   \n").unwrap(), cfg);
    }

    #[test]
    fn dump_round_trips() {
        let cfg = FusionConfig {
            ref_noise: 13.5,
            haze_side: 9,
            ..FusionConfig::default()
        }
        .with_scaled_weight(2, 1.1);
        assert_eq!(parse_config(&dump_config(&cfg)).unwrap(), cfg);
    }

    #[test]
    fn override_single_reference() {
        let cfg = parse_config("ref_noise = 13.5  # -10%").unwrap();
        assert_eq!(cfg.ref_noise, 13.5);
        assert_eq!(cfg.ref_haze, 100.0);
    }

    #[test]
    fn weights_must_sum_to_one() {
        let err = parse_config("w_blur = 0.20").unwrap_err();
        assert!(matches!(err, Error::InvalidWeights { .. }), "{err}");
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_config("ref_noise = 1\n\nbogus = 3").unwrap_err() {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("bogus"));
            }
            e => panic!("unexpected {e}"),
        }
        assert!(matches!(parse_config("ref_noise 3"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_config("t_under = -4"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_config("haze_side = 3\nhaze_side = 5"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_config("ref_haze = 0").is_err());
    }
}

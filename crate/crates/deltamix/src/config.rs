//! Run configuration, read from TOML and embedded in every artifact.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use deltamix_core::{Limits, Thresholds, DEFAULT_HORIZON};
use serde::{Deserialize, Serialize};

use crate::error::{read_file, CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub max_word_length: usize,
    pub max_words: usize,
    pub max_selectors: usize,
    pub max_depth: usize,
    pub max_family: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdConfig {
    pub p_min: u32,
    pub eps_min: f64,
    pub tail_fraction: f64,
    pub entropy_tol: f64,
    /// Symbols compared per distance evaluation in scans.
    pub window: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub artifact: Option<PathBuf>,
    pub trace_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub horizon: usize,
    /// Always true; present so artifacts state it.
    pub deterministic: bool,
    pub caps: Caps,
    pub thresholds: ThresholdConfig,
    pub outputs: Outputs,
}

impl Default for Caps {
    fn default() -> Self {
        let l = Limits::default();
        Caps {
            max_word_length: l.max_word_length,
            max_words: l.max_words,
            max_selectors: l.max_selectors,
            max_depth: l.max_depth,
            max_family: l.max_family,
        }
    }
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        let t = Thresholds::default();
        ThresholdConfig {
            p_min: t.p_min,
            eps_min: t.eps_min,
            tail_fraction: t.tail_fraction,
            entropy_tol: 1e-12,
            window: t.p_min as usize + 1,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            horizon: DEFAULT_HORIZON,
            deterministic: true,
            caps: Caps::default(),
            thresholds: ThresholdConfig::default(),
            outputs: Outputs::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_file(path)?;
        let cfg: RunConfig = toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.caps;
        let caps = [
            ("horizon", self.horizon),
            ("caps.max_word_length", c.max_word_length),
            ("caps.max_words", c.max_words),
            ("caps.max_selectors", c.max_selectors),
            ("caps.max_depth", c.max_depth),
            ("caps.max_family", c.max_family),
            ("thresholds.window", self.thresholds.window),
        ];
        if let Some((k, _)) = caps.iter().find(|(_, v)| *v == 0) {
            return Err(CliError::Config(format!("{k} must be positive")));
        }
        let t = &self.thresholds;
        if !self.deterministic {
            return Err(CliError::Config("deterministic cannot be turned off".into()));
        }
        if !(t.eps_min > 0.0 && t.eps_min <= 1.0) {
            return Err(CliError::Config("thresholds.eps_min must lie in (0, 1]".into()));
        }
        if !(t.tail_fraction > 0.0 && t.tail_fraction <= 1.0) {
            return Err(CliError::Config("thresholds.tail_fraction must lie in (0, 1]".into()));
        }
        if t.entropy_tol.is_nan() || t.entropy_tol <= 0.0 {
            return Err(CliError::Config("thresholds.entropy_tol must be positive".into()));
        }
        Ok(())
    }

    pub fn limits(&self) -> Limits {
        let c = &self.caps;
        Limits {
            max_word_length: c.max_word_length,
            max_words: c.max_words,
            max_selectors: c.max_selectors,
            max_depth: c.max_depth,
            max_family: c.max_family,
        }
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds {
            p_min: self.thresholds.p_min,
            eps_min: self.thresholds.eps_min,
            tail_fraction: self.thresholds.tail_fraction,
        }
    }

    /// One `key=value` line, keys in a fixed order.
    pub fn to_line(&self) -> String {
        let c = &self.caps;
        let t = &self.thresholds;
        let mut s = format!(
            "horizon={} deterministic={} max_word_length={} max_words={} max_selectors={} max_depth={} max_family={} \
             p_min={} eps_min={} tail_fraction={} entropy_tol={:e} window={}",
            self.horizon,
            self.deterministic,
            c.max_word_length,
            c.max_words,
            c.max_selectors,
            c.max_depth,
            c.max_family,
            t.p_min,
            t.eps_min,
            t.tail_fraction,
            t.entropy_tol,
            t.window,
        );
        if let Some(p) = &self.outputs.artifact {
            let _ = write!(s, " artifact={}", p.display());
        }
        if let Some(p) = &self.outputs.trace_dir {
            let _ = write!(s, " trace_dir={}", p.display());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_core() {
        let c = RunConfig::default();
        assert_eq!(c.limits(), Limits::default());
        assert_eq!(c.thresholds(), Thresholds::default());
        c.validate().unwrap();
    }

    #[test]
    fn partial_toml() {
        let c: RunConfig = toml::from_str("horizon = 64\n[thresholds]\np_min = 6\n").unwrap();
        assert_eq!(c.horizon, 64);
        assert_eq!(c.thresholds.p_min, 6);
        assert_eq!(c.caps, Caps::default());
    }

    #[test]
    fn rejects_zero_caps_and_unknown_keys() {
        let c: RunConfig = toml::from_str("[caps]\nmax_selectors = 0\n").unwrap();
        assert!(c.validate().is_err());
        assert!(toml::from_str::<RunConfig>("seed = 3\n").is_err());
        let c: RunConfig = toml::from_str("deterministic = false\n").unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn round_trips_through_toml() {
        let c = RunConfig::default();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(toml::from_str::<RunConfig>(&text).unwrap(), c);
    }
}

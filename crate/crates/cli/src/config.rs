//! Run configuration: a flat JSON file overlaid with command-line flags,
//! with unset parameters falling back to the baseline calibration.

use std::fs;
use std::path::{Path, PathBuf};

use bubble_core::analysis::{CrashConfig, SweepAxis, SweepSpec};
use bubble_core::model::ModelParams;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SWEEP_SEEDS: std::ops::RangeInclusive<u64> = 0..=49;

/// Seeds given either as a list or as an inclusive `"A..B"` range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedList {
    List(Vec<u64>),
    Range(String),
}

impl SeedList {
    pub fn resolve(&self) -> Result<Vec<u64>, CliError> {
        match self {
            SeedList::List(v) => Ok(v.clone()),
            SeedList::Range(s) => parse_seeds(s),
        }
    }
}

/// Parses `A..B` (inclusive) or a comma-separated list.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || {
        CliError::Config(format!(
            "invalid seeds `{s}` (expected `A..B` or `s1,s2,...`)"
        ))
    };
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect()
}

/// Every configurable setting, each optional. Used for the config file, for
/// flag overrides, and (fully populated) as the provenance echo in JSON
/// summaries.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub periods: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(
        rename = "Lambda",
        alias = "lambda",
        skip_serializing_if = "Option::is_none"
    )]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_p0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<SeedList>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_window: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_drawdown: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot: Option<bool>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),* $(,)?) => {
        FileConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| CliError::Config(format!("{}: {}", path.display(), e)))
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        if text.trim().is_empty() {
            return Ok(FileConfig::default());
        }
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Fields set in `top` win over `self`.
    pub fn overlay(self, top: FileConfig) -> FileConfig {
        let base = self;
        overlay!(base, top;
            periods, d, r, lambda, k, h, a, b, c, log_p0, x0,
            seed, seeds, threshold, peak_window, min_drawdown,
            axis, values, out, plot)
    }

    pub fn params(&self) -> ModelParams {
        let base = ModelParams::default();
        ModelParams {
            periods: self.periods.unwrap_or(base.periods),
            tick_size: self.d.unwrap_or(base.tick_size),
            decay_rate: self.r.unwrap_or(base.decay_rate),
            base_intensity: self.lambda.unwrap_or(base.base_intensity),
            intensity_sensitivity: self.k.unwrap_or(base.intensity_sensitivity),
            cubic_scale: self.h.unwrap_or(base.cubic_scale),
            root_low: self.a.unwrap_or(base.root_low),
            root_mid: self.b.unwrap_or(base.root_mid),
            root_high: self.c.unwrap_or(base.root_high),
            log_p0: self.log_p0.unwrap_or(base.log_p0),
            x0: self.x0.unwrap_or(base.x0),
        }
    }

    pub fn crash(&self) -> CrashConfig {
        CrashConfig {
            threshold: self.threshold,
            peak_window: self
                .peak_window
                .unwrap_or(CrashConfig::default().peak_window),
            min_drawdown: self.min_drawdown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Simulate,
    Sweep,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunMode {
    Simulate { seed: u64 },
    Sweep(SweepSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub crash: CrashConfig,
    pub out_dir: PathBuf,
    pub plot: bool,
    pub mode: RunMode,
}

impl RunConfig {
    /// Resolves a merged [`FileConfig`] into a validated run configuration.
    pub fn resolve(cfg: &FileConfig, mode: Mode) -> Result<RunConfig, CliError> {
        let params = cfg.params().validated()?;
        let crash = cfg.crash();
        crash.validate()?;

        let mode = match mode {
            Mode::Simulate => {
                if cfg.axis.is_some() || cfg.values.is_some() {
                    return Err(CliError::Config(
                        "`axis`/`values` are sweep settings; use the `sweep` subcommand".into(),
                    ));
                }
                if cfg.seeds.is_some() {
                    return Err(CliError::Config(
                        "`seeds` is a sweep setting; use `seed` for a single run".into(),
                    ));
                }
                RunMode::Simulate {
                    seed: cfg.seed.unwrap_or(DEFAULT_SEED),
                }
            }
            Mode::Sweep => {
                let axis: SweepAxis = cfg
                    .axis
                    .as_deref()
                    .ok_or_else(|| CliError::Config("sweep requires `axis`".into()))?
                    .parse()?;
                let values = cfg
                    .values
                    .clone()
                    .ok_or_else(|| CliError::Config("sweep requires `values`".into()))?;
                let seeds = match (&cfg.seeds, cfg.seed) {
                    (Some(_), Some(_)) => {
                        return Err(CliError::Config(
                            "give either `seed` or `seeds`, not both".into(),
                        ))
                    }
                    (Some(list), None) => list.resolve()?,
                    (None, Some(s)) => vec![s],
                    (None, None) => DEFAULT_SWEEP_SEEDS.collect(),
                };
                let spec = SweepSpec {
                    base: params,
                    axis,
                    values,
                    seeds,
                };
                spec.validate()?;
                RunMode::Sweep(spec)
            }
        };

        Ok(RunConfig {
            params,
            crash,
            out_dir: cfg.out.clone().unwrap_or_else(|| PathBuf::from(".")),
            plot: cfg.plot.unwrap_or(false),
            mode,
        })
    }

    /// The fully populated effective configuration, as accepted by
    /// `--config`. Output location is omitted.
    pub fn effective(&self) -> FileConfig {
        let p = &self.params;
        let mut cfg = FileConfig {
            periods: Some(p.periods),
            d: Some(p.tick_size),
            r: Some(p.decay_rate),
            lambda: Some(p.base_intensity),
            k: Some(p.intensity_sensitivity),
            h: Some(p.cubic_scale),
            a: Some(p.root_low),
            b: Some(p.root_mid),
            c: Some(p.root_high),
            log_p0: Some(p.log_p0),
            x0: Some(p.x0),
            threshold: self.crash.threshold,
            peak_window: Some(self.crash.peak_window),
            min_drawdown: self.crash.min_drawdown,
            plot: Some(self.plot),
            ..Default::default()
        };
        match &self.mode {
            RunMode::Simulate { seed } => cfg.seed = Some(*seed),
            RunMode::Sweep(spec) => {
                cfg.seeds = Some(SeedList::List(spec.seeds.clone()));
                cfg.axis = Some(spec.axis.name().to_string());
                cfg.values = Some(spec.values.clone());
            }
        }
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_baseline() {
        let cfg = FileConfig::from_json("").unwrap();
        let run = RunConfig::resolve(&cfg, Mode::Simulate).unwrap();
        assert_eq!(run.params, ModelParams::default());
        assert_eq!(run.mode, RunMode::Simulate { seed: DEFAULT_SEED });
        let cfg = FileConfig::from_json("{}").unwrap();
        assert_eq!(cfg.params(), ModelParams::default());
    }

    #[test]
    fn flags_override_file() {
        let file = FileConfig::from_json(r#"{"b": 0.015, "k": 5}"#).unwrap();
        let flags = FileConfig {
            b: Some(0.01),
            ..Default::default()
        };
        let p = file.overlay(flags).params();
        assert_eq!(p.root_mid, 0.01);
        assert_eq!(p.intensity_sensitivity, 5.0);
        assert_eq!(p.decay_rate, 0.001);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = FileConfig::from_json(r#"{"b": 0.01, "bogus": 1}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn constraint_violation_is_quoted() {
        let cfg = FileConfig::from_json(r#"{"a": 2, "c": 1}"#).unwrap();
        let err = RunConfig::resolve(&cfg, Mode::Simulate).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("requires a < b < c"), "{err}");
    }

    #[test]
    fn seeds_syntax() {
        assert_eq!(parse_seeds("0..49").unwrap().len(), 50);
        assert_eq!(parse_seeds("3..=5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_seeds("7, 1,2").unwrap(), vec![7, 1, 2]);
        assert!(parse_seeds("5..1").is_err());
        assert!(parse_seeds("x").is_err());
        let cfg = FileConfig::from_json(r#"{"seeds": "1..3"}"#).unwrap();
        assert_eq!(cfg.seeds.unwrap().resolve().unwrap(), vec![1, 2, 3]);
        let cfg = FileConfig::from_json(r#"{"seeds": [4, 2]}"#).unwrap();
        assert_eq!(cfg.seeds.unwrap().resolve().unwrap(), vec![4, 2]);
    }

    #[test]
    fn modes_are_exclusive() {
        let cfg = FileConfig::from_json(r#"{"axis": "b", "values": [0.01]}"#).unwrap();
        assert!(RunConfig::resolve(&cfg, Mode::Simulate).is_err());
        let run = RunConfig::resolve(&cfg, Mode::Sweep).unwrap();
        match run.mode {
            RunMode::Sweep(spec) => assert_eq!(spec.seeds.len(), 50),
            _ => panic!("expected sweep"),
        }
        let cfg = FileConfig::from_json(r#"{"values": [0.01]}"#).unwrap();
        assert!(RunConfig::resolve(&cfg, Mode::Sweep).is_err());
    }

    #[test]
    fn effective_config_reproduces_run() {
        let cfg = FileConfig::from_json(r#"{"b": 0.01, "seed": 9, "min_drawdown": 0.1}"#).unwrap();
        let run = RunConfig::resolve(&cfg, Mode::Simulate).unwrap();
        let echoed = serde_json::to_string(&run.effective()).unwrap();
        let again =
            RunConfig::resolve(&FileConfig::from_json(&echoed).unwrap(), Mode::Simulate).unwrap();
        assert_eq!(
            RunConfig {
                out_dir: run.out_dir.clone(),
                ..again
            },
            run
        );
    }
}

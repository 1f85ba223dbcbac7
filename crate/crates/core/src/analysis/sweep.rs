//! One-parameter-at-a-time sweeps over matched seed ensembles.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::crash::CrashConfig;
use super::stats::{summarize, Quartiles, StatField, SummaryStats};
use crate::error::AnalysisError;
use crate::model::{simulate, ModelParams};

/// Scalar parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    B,
    R,
    Lambda,
    D,
    K,
    H,
    A,
    C,
    LogP0,
    X0,
}

impl SweepAxis {
    const NAMES: [(&'static str, SweepAxis); 10] = [
        ("b", SweepAxis::B),
        ("r", SweepAxis::R),
        ("lambda", SweepAxis::Lambda),
        ("d", SweepAxis::D),
        ("k", SweepAxis::K),
        ("h", SweepAxis::H),
        ("a", SweepAxis::A),
        ("c", SweepAxis::C),
        ("log_p0", SweepAxis::LogP0),
        ("x0", SweepAxis::X0),
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES.iter().find(|(_, a)| *a == self).unwrap().0
    }

    pub fn get(self, p: &ModelParams) -> f64 {
        *self.field(&mut p.clone())
    }

    /// Copy of `base` with this axis set to `value`. Not validated.
    pub fn apply(self, base: &ModelParams, value: f64) -> ModelParams {
        let mut p = *base;
        *self.field(&mut p) = value;
        p
    }

    fn field(self, p: &mut ModelParams) -> &mut f64 {
        match self {
            SweepAxis::B => &mut p.root_mid,
            SweepAxis::R => &mut p.decay_rate,
            SweepAxis::Lambda => &mut p.base_intensity,
            SweepAxis::D => &mut p.tick_size,
            SweepAxis::K => &mut p.intensity_sensitivity,
            SweepAxis::H => &mut p.cubic_scale,
            SweepAxis::A => &mut p.root_low,
            SweepAxis::C => &mut p.root_high,
            SweepAxis::LogP0 => &mut p.log_p0,
            SweepAxis::X0 => &mut p.x0,
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        Self::NAMES
            .iter()
            .find(|(n, _)| *n == lower)
            .map(|(_, a)| *a)
            .ok_or_else(|| {
                AnalysisError::InvalidSweep(format!(
                    "unknown axis `{s}` (expected one of: {})",
                    Self::NAMES.map(|(n, _)| n).join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// Applied unchanged to every value.
    pub seeds: Vec<u64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.values.is_empty() {
            return Err(AnalysisError::InvalidSweep("no sweep values".into()));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(AnalysisError::InvalidSweep(format!(
                "sweep values must be finite, got {v}"
            )));
        }
        if !self.values.windows(2).all(|w| w[0] < w[1]) {
            return Err(AnalysisError::InvalidSweep(
                "sweep values must be strictly increasing".into(),
            ));
        }
        if self.seeds.is_empty() {
            return Err(AnalysisError::InvalidSweep("no seeds".into()));
        }
        Ok(())
    }

    pub fn params_for(&self, value: f64) -> ModelParams {
        self.axis.apply(&self.base, value)
    }
}

/// Outcome of one `(value, seed)` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub value: f64,
    pub seed: u64,
    pub stats: Option<SummaryStats>,
    pub error: Option<String>,
}

/// Ensemble statistics of every [`StatField`] for one sweep value.
/// A field is absent when no seed produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueSummary {
    pub value: f64,
    pub n_ok: usize,
    pub n_failed: usize,
    pub peak_log_price: Option<Quartiles>,
    pub total_trades: Option<Quartiles>,
    pub n_crashes: Option<Quartiles>,
    pub mean_inter_crash_interval: Option<Quartiles>,
    pub max_momentum: Option<Quartiles>,
    pub time_above_threshold: Option<Quartiles>,
}

impl ValueSummary {
    fn from_cells(value: f64, cells: &[SweepCell]) -> Self {
        let ok: Vec<&SummaryStats> = cells.iter().filter_map(|c| c.stats.as_ref()).collect();
        let q = |f: StatField| {
            let xs: Vec<f64> = ok.iter().filter_map(|s| f.value(s)).collect();
            Quartiles::of(&xs)
        };
        ValueSummary {
            value,
            n_ok: ok.len(),
            n_failed: cells.len() - ok.len(),
            peak_log_price: q(StatField::PeakLogPrice),
            total_trades: q(StatField::TotalTrades),
            n_crashes: q(StatField::NCrashes),
            mean_inter_crash_interval: q(StatField::MeanInterCrashInterval),
            max_momentum: q(StatField::MaxMomentum),
            time_above_threshold: q(StatField::TimeAboveThreshold),
        }
    }

    pub fn field(&self, f: StatField) -> Option<&Quartiles> {
        match f {
            StatField::PeakLogPrice => self.peak_log_price.as_ref(),
            StatField::TotalTrades => self.total_trades.as_ref(),
            StatField::NCrashes => self.n_crashes.as_ref(),
            StatField::MeanInterCrashInterval => self.mean_inter_crash_interval.as_ref(),
            StatField::MaxMomentum => self.max_momentum.as_ref(),
            StatField::TimeAboveThreshold => self.time_above_threshold.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub crash: CrashConfig,
    /// Values-major, seeds-minor: cell `i * seeds.len() + j` holds
    /// `(values[i], seeds[j])`.
    pub cells: Vec<SweepCell>,
    pub summaries: Vec<ValueSummary>,
}

impl SweepResult {
    pub fn cell(&self, value_idx: usize, seed_idx: usize) -> &SweepCell {
        &self.cells[value_idx * self.spec.seeds.len() + seed_idx]
    }

    pub fn cells_for(&self, value_idx: usize) -> &[SweepCell] {
        let n = self.spec.seeds.len();
        &self.cells[value_idx * n..(value_idx + 1) * n]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

pub fn run_sweep(spec: &SweepSpec, cfg: &CrashConfig) -> Result<SweepResult, AnalysisError> {
    run_sweep_with(spec, cfg, Execution::default())
}

pub fn run_sweep_with(
    spec: &SweepSpec,
    cfg: &CrashConfig,
    execution: Execution,
) -> Result<SweepResult, AnalysisError> {
    spec.validate()?;
    cfg.validate()?;

    let jobs: Vec<(f64, u64)> = spec
        .values
        .iter()
        .flat_map(|&v| spec.seeds.iter().map(move |&s| (v, s)))
        .collect();
    let run = |&(value, seed): &(f64, u64)| run_cell(spec, cfg, value, seed);
    // `collect` on an indexed parallel iterator preserves input order.
    let cells: Vec<SweepCell> = match execution {
        Execution::Serial => jobs.iter().map(run).collect(),
        Execution::Parallel => jobs.par_iter().map(run).collect(),
    };

    if let Some(first) = cells.iter().find_map(|c| c.error.as_ref()) {
        if cells.iter().all(|c| c.stats.is_none()) {
            return Err(AnalysisError::SweepFailed(first.clone()));
        }
    }

    let n = spec.seeds.len();
    let summaries = spec
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| ValueSummary::from_cells(v, &cells[i * n..(i + 1) * n]))
        .collect();

    Ok(SweepResult {
        spec: spec.clone(),
        crash: *cfg,
        cells,
        summaries,
    })
}

fn run_cell(spec: &SweepSpec, cfg: &CrashConfig, value: f64, seed: u64) -> SweepCell {
    let outcome = simulate(&spec.params_for(value), seed)
        .map_err(AnalysisError::from)
        .and_then(|traj| summarize(&traj, cfg));
    let (stats, error) = match outcome {
        Ok(s) => (Some(s), None),
        Err(e) => (None, Some(e.to_string())),
    };
    SweepCell {
        value,
        seed,
        stats,
        error,
    }
}

/// Medians of `field` in sweep-value order; `None` where no seed produced
/// the field.
pub fn compare_medians(
    result: &SweepResult,
    field: &str,
) -> Result<Vec<(f64, Option<f64>)>, AnalysisError> {
    let field: StatField = field.parse()?;
    Ok(result
        .summaries
        .iter()
        .map(|s| (s.value, s.field(field).map(|q| q.median)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_base() -> ModelParams {
        ModelParams {
            periods: 400,
            ..Default::default()
        }
    }

    #[test]
    fn axis_parse_and_apply() {
        assert_eq!("Lambda".parse::<SweepAxis>().unwrap(), SweepAxis::Lambda);
        assert!("zeta".parse::<SweepAxis>().is_err());
        let p = SweepAxis::B.apply(&ModelParams::default(), 0.01);
        assert_eq!(p.root_mid, 0.01);
        assert_eq!(SweepAxis::R.get(&p), 0.001);
        for (name, axis) in SweepAxis::NAMES {
            assert_eq!(axis.name(), name);
        }
    }

    #[test]
    fn spec_validation() {
        let mut spec = SweepSpec {
            base: small_base(),
            axis: SweepAxis::B,
            values: vec![0.01, 0.02],
            seeds: vec![1],
        };
        spec.validate().unwrap();
        spec.values = vec![0.02, 0.01];
        assert!(spec.validate().is_err());
        spec.values = vec![];
        assert!(spec.validate().is_err());
        spec.values = vec![0.01];
        spec.seeds.clear();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn grid_is_values_major() {
        let spec = SweepSpec {
            base: small_base(),
            axis: SweepAxis::Lambda,
            values: vec![-2.5, -2.0],
            seeds: vec![7, 3, 5],
        };
        let res = run_sweep(&spec, &CrashConfig::default()).unwrap();
        assert_eq!(res.cells.len(), 6);
        for (i, &v) in spec.values.iter().enumerate() {
            for (j, &s) in spec.seeds.iter().enumerate() {
                let c = res.cell(i, j);
                assert_eq!((c.value, c.seed), (v, s));
                assert!(c.stats.is_some());
            }
        }
        assert_eq!(res.summaries.len(), 2);
        assert_eq!(res.summaries[0].n_ok, 3);
    }

    #[test]
    fn invalid_cells_are_isolated() {
        // b = 1.5 violates b < c = 1.
        let spec = SweepSpec {
            base: small_base(),
            axis: SweepAxis::B,
            values: vec![0.02, 1.5],
            seeds: vec![1, 2],
        };
        let res = run_sweep(&spec, &CrashConfig::default()).unwrap();
        assert_eq!(res.summaries[0].n_ok, 2);
        assert_eq!(res.summaries[1].n_failed, 2);
        assert!(res.summaries[1].peak_log_price.is_none());
        let err = res.cell(1, 0).error.as_deref().unwrap();
        assert!(err.contains("a < b < c"), "{err}");
    }

    #[test]
    fn fully_failed_sweep_errors() {
        let spec = SweepSpec {
            base: small_base(),
            axis: SweepAxis::B,
            values: vec![1.5, 2.0],
            seeds: vec![1],
        };
        assert!(matches!(
            run_sweep(&spec, &CrashConfig::default()),
            Err(AnalysisError::SweepFailed(_))
        ));
    }

    #[test]
    fn compare_medians_examples() {
        let spec = SweepSpec {
            base: small_base(),
            axis: SweepAxis::B,
            values: vec![0.02],
            seeds: vec![4],
        };
        let res = run_sweep(&spec, &CrashConfig::default()).unwrap();
        let med = compare_medians(&res, "total_trades").unwrap();
        let single = res.cells[0].stats.unwrap().total_trades as f64;
        assert_eq!(med, vec![(0.02, Some(single))]);
        assert!(matches!(
            compare_medians(&res, "bogus"),
            Err(AnalysisError::UnknownField(_))
        ));
    }

    #[test]
    fn compare_medians_of_constant_ensembles() {
        let stats = |n: usize| SummaryStats {
            peak_log_price: 0.0,
            total_trades: 0,
            n_crashes: n,
            mean_inter_crash_interval: None,
            max_momentum: 0.0,
            time_above_threshold: 0,
        };
        let spec = SweepSpec {
            base: small_base(),
            axis: SweepAxis::B,
            values: vec![0.01, 0.02, 0.03],
            seeds: vec![1, 2, 3],
        };
        let mut cells = Vec::new();
        for &v in &spec.values {
            for (j, &s) in spec.seeds.iter().enumerate() {
                cells.push(SweepCell {
                    value: v,
                    seed: s,
                    stats: Some(stats(j + 1)),
                    error: None,
                });
            }
        }
        let summaries = spec
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| ValueSummary::from_cells(v, &cells[i * 3..i * 3 + 3]))
            .collect();
        let res = SweepResult {
            spec,
            crash: CrashConfig::default(),
            cells,
            summaries,
        };
        let med = compare_medians(&res, "n_crashes").unwrap();
        assert!(med.iter().all(|&(_, m)| m == Some(2.0)));
        let intervals = compare_medians(&res, "mean_inter_crash_interval").unwrap();
        assert!(intervals.iter().all(|&(_, m)| m.is_none()));
    }
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::crash::{detect_with, CrashConfig};
use crate::error::AnalysisError;
use crate::model::Trajectory;

/// Per-trajectory summary used to compare parameter settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub peak_log_price: f64,
    pub total_trades: u64,
    pub n_crashes: usize,
    /// Mean gap between consecutive crash crossings; absent with fewer than
    /// two crashes.
    pub mean_inter_crash_interval: Option<f64>,
    pub max_momentum: f64,
    /// Steps with momentum strictly above the crash threshold.
    pub time_above_threshold: usize,
}

pub fn summarize(traj: &Trajectory, cfg: &CrashConfig) -> Result<SummaryStats, AnalysisError> {
    let cfg = cfg.resolve(&traj.params)?;
    let events = detect_with(traj, &cfg)?;

    let mean_inter_crash_interval = (events.len() >= 2).then(|| {
        let span = events[events.len() - 1].t_cross - events[0].t_cross;
        span as f64 / (events.len() - 1) as f64
    });

    Ok(SummaryStats {
        peak_log_price: traj.log_prices().fold(f64::NEG_INFINITY, f64::max),
        total_trades: traj.records.last().map_or(0, |r| r.n_trades),
        n_crashes: events.len(),
        mean_inter_crash_interval,
        max_momentum: traj.momenta().fold(f64::NEG_INFINITY, f64::max),
        time_above_threshold: traj.momenta().filter(|&m| m > cfg.threshold).count(),
    })
}

/// Names a numeric field of [`SummaryStats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatField {
    PeakLogPrice,
    TotalTrades,
    NCrashes,
    MeanInterCrashInterval,
    MaxMomentum,
    TimeAboveThreshold,
}

impl StatField {
    pub const ALL: [StatField; 6] = [
        StatField::PeakLogPrice,
        StatField::TotalTrades,
        StatField::NCrashes,
        StatField::MeanInterCrashInterval,
        StatField::MaxMomentum,
        StatField::TimeAboveThreshold,
    ];

    pub const NAMES: [&'static str; 6] = [
        "peak_log_price",
        "total_trades",
        "n_crashes",
        "mean_inter_crash_interval",
        "max_momentum",
        "time_above_threshold",
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }

    pub fn value(self, s: &SummaryStats) -> Option<f64> {
        match self {
            StatField::PeakLogPrice => Some(s.peak_log_price),
            StatField::TotalTrades => Some(s.total_trades as f64),
            StatField::NCrashes => Some(s.n_crashes as f64),
            StatField::MeanInterCrashInterval => s.mean_inter_crash_interval,
            StatField::MaxMomentum => Some(s.max_momentum),
            StatField::TimeAboveThreshold => Some(s.time_above_threshold as f64),
        }
    }
}

impl fmt::Display for StatField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatField {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::NAMES
            .iter()
            .position(|&n| n == s)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| AnalysisError::UnknownField(s.to_string()))
    }
}

/// Median and quartiles of a sample (linear interpolation between order
/// statistics).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
}

impl Quartiles {
    /// `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Quartiles> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let q1 = quantile_sorted(&sorted, 0.25);
        let q3 = quantile_sorted(&sorted, 0.75);
        Some(Quartiles {
            median: quantile_sorted(&sorted, 0.5),
            q1,
            q3,
            iqr: q3 - q1,
        })
    }
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

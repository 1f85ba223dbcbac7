//! Bubble-crash episode detection on simulated trajectories.
//!
//! An episode starts at a momentum up-crossing of the threshold
//! (`M_{t-1} <= threshold < M_t`). Its peak is the highest log-price within
//! `peak_window` steps of the crossing; its trough is the lowest log-price
//! from the peak up to the next crossing after the peak (or the end of the
//! trajectory). Crossings between an episode's start and its peak belong to
//! that episode. The episode is reported as a crash when the peak-to-trough
//! drop reaches `min_drawdown`.

use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::model::{ModelParams, Trajectory};

/// Default number of steps after a crossing searched for the peak.
pub const DEFAULT_PEAK_WINDOW: usize = 500;

/// Default drawdown floor in ticks.
pub const DEFAULT_MIN_DRAWDOWN_TICKS: f64 = 5.0;

// Log-prices are `log_p0 + d * j` evaluated in floating point, so a drop of
// exactly `n` ticks can land a few ulps below `n * d`.
const DRAWDOWN_REL_SLACK: f64 = 1e-9;

/// Detector settings. Unset fields resolve against the trajectory's
/// parameters: the threshold to `b`, the drawdown floor to `5 d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrashConfig {
    #[serde(default)]
    pub threshold: Option<f64>,
    #[serde(default = "default_peak_window")]
    pub peak_window: usize,
    #[serde(default)]
    pub min_drawdown: Option<f64>,
}

fn default_peak_window() -> usize {
    DEFAULT_PEAK_WINDOW
}

impl Default for CrashConfig {
    fn default() -> Self {
        CrashConfig {
            threshold: None,
            peak_window: DEFAULT_PEAK_WINDOW,
            min_drawdown: None,
        }
    }
}

/// A [`CrashConfig`] with every field fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedCrashConfig {
    pub threshold: f64,
    pub peak_window: usize,
    pub min_drawdown: f64,
}

impl CrashConfig {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.peak_window < 1 {
            return Err(AnalysisError::Domain("requires peak_window >= 1".into()));
        }
        if let Some(t) = self.threshold {
            if !t.is_finite() {
                return Err(AnalysisError::Domain(format!(
                    "crash threshold must be finite, got {t}"
                )));
            }
        }
        if let Some(dd) = self.min_drawdown {
            if !(dd > 0.0 && dd.is_finite()) {
                return Err(AnalysisError::Domain(format!(
                    "requires min_drawdown > 0, got {dd}"
                )));
            }
        }
        Ok(())
    }

    pub fn resolve(&self, params: &ModelParams) -> Result<ResolvedCrashConfig, AnalysisError> {
        self.validate()?;
        Ok(ResolvedCrashConfig {
            threshold: self.threshold.unwrap_or(params.root_mid),
            peak_window: self.peak_window,
            min_drawdown: self
                .min_drawdown
                .unwrap_or(DEFAULT_MIN_DRAWDOWN_TICKS * params.tick_size),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrashEvent {
    pub t_cross: usize,
    pub t_peak: usize,
    pub peak_log_price: f64,
    pub t_trough: usize,
    pub drawdown: f64,
}

/// Indices `i` of `momenta` with `momenta[i - 1] <= threshold < momenta[i]`.
pub fn up_crossings(momenta: &[f64], threshold: f64) -> Vec<usize> {
    (1..momenta.len())
        .filter(|&i| momenta[i - 1] <= threshold && threshold < momenta[i])
        .collect()
}

pub fn detect_crashes(
    traj: &Trajectory,
    cfg: &CrashConfig,
) -> Result<Vec<CrashEvent>, AnalysisError> {
    let cfg = cfg.resolve(&traj.params)?;
    detect_with(traj, &cfg)
}

pub(crate) fn detect_with(
    traj: &Trajectory,
    cfg: &ResolvedCrashConfig,
) -> Result<Vec<CrashEvent>, AnalysisError> {
    let n = traj.len();
    if n < 2 {
        return Err(AnalysisError::Domain(format!(
            "crash detection needs at least 2 records, got {n}"
        )));
    }
    let prices: Vec<f64> = traj.log_prices().collect();
    let momenta: Vec<f64> = traj.momenta().collect();
    let crossings = up_crossings(&momenta, cfg.threshold);
    let floor = cfg.min_drawdown * (1.0 - DRAWDOWN_REL_SLACK);

    let mut events = Vec::new();
    let mut ci = 0;
    while ci < crossings.len() {
        let cross = crossings[ci];
        let window_end = (cross + cfg.peak_window).min(n - 1);
        let peak = first_extremum(&prices, cross, window_end + 1, |a, b| a > b);

        let next_ci = ci + crossings[ci..].partition_point(|&c| c <= peak);
        let episode_end = crossings.get(next_ci).copied().unwrap_or(n);
        let trough = first_extremum(&prices, peak, episode_end, |a, b| a < b);

        let drawdown = prices[peak] - prices[trough];
        if drawdown >= floor {
            events.push(CrashEvent {
                t_cross: traj.records[cross].t,
                t_peak: traj.records[peak].t,
                peak_log_price: prices[peak],
                t_trough: traj.records[trough].t,
                drawdown,
            });
        }
        ci = next_ci;
    }
    Ok(events)
}

/// Index of the first element of `xs[lo..hi]` that no later element beats.
fn first_extremum(xs: &[f64], lo: usize, hi: usize, better: impl Fn(f64, f64) -> bool) -> usize {
    (lo + 1..hi).fold(lo, |best, i| if better(xs[i], xs[best]) { i } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::StepRecord;

    const D: f64 = 0.01;

    fn synthetic(momenta: &[f64], ticks: &[i64]) -> Trajectory {
        assert_eq!(momenta.len(), ticks.len());
        let params = ModelParams {
            periods: momenta.len(),
            ..Default::default()
        };
        let records = momenta
            .iter()
            .zip(ticks)
            .enumerate()
            .map(|(i, (&m, &j))| StepRecord {
                t: i + 1,
                log_price: D * j as f64,
                momentum: m,
                lambda: 0.0,
                x: 0.0,
                trade: false,
                direction: false,
                n_trades: 0,
            })
            .collect();
        Trajectory {
            params,
            seed: 0,
            records,
        }
    }

    /// Momentum jumps above b = 0.02 at index 5; price climbs to 10 ticks at
    /// index 8, then falls by `drop` ticks.
    fn one_crossing(drop: i64) -> Trajectory {
        let mut m = vec![0.0; 30];
        let mut ticks = vec![0i64; 30];
        for (i, mi) in m.iter_mut().enumerate().skip(5).take(10) {
            *mi = 0.03 + 0.001 * i as f64;
        }
        for (i, tk) in ticks.iter_mut().enumerate() {
            *tk = match i {
                0..=3 => 0,
                4..=8 => 2 * (i as i64 - 3),
                _ => (10 - (i as i64 - 8)).max(10 - drop),
            };
        }
        synthetic(&m, &ticks)
    }

    #[test]
    fn flat_trajectory_has_no_events() {
        let traj = synthetic(&[0.0; 20], &[0; 20]);
        assert!(detect_crashes(&traj, &CrashConfig::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn ten_tick_drop_is_one_event() {
        let events = detect_crashes(&one_crossing(10), &CrashConfig::default()).unwrap();
        assert_eq!(events.len(), 1);
        let e = events[0];
        assert_eq!(e.t_cross, 6);
        assert_eq!(e.t_peak, 9);
        assert_eq!(e.t_trough, 19);
        assert!((e.drawdown - 10.0 * D).abs() < 1e-15);
        assert!((e.peak_log_price - 0.1).abs() < 1e-15);
    }

    #[test]
    fn sub_floor_drop_is_filtered() {
        let events = detect_crashes(&one_crossing(2), &CrashConfig::default()).unwrap();
        assert!(events.is_empty());
    }

    #[test]
    fn exact_floor_counts() {
        let events = detect_crashes(&one_crossing(5), &CrashConfig::default()).unwrap();
        assert_eq!(events.len(), 1);
    }

    #[test]
    fn crossings_before_peak_merge() {
        // Momentum oscillates around b while price rises: several crossings,
        // one episode.
        let m = [0.0, 0.03, 0.01, 0.03, 0.01, 0.03, 0.0, 0.0, 0.0, 0.0];
        let ticks = [0, 1, 2, 3, 4, 8, 6, 4, 2, 0];
        let events = detect_crashes(&synthetic(&m, &ticks), &CrashConfig::default()).unwrap();
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].t_cross, 2);
        assert_eq!(events[0].t_peak, 6);
        assert_eq!(events[0].t_trough, 10);
    }

    #[test]
    fn trough_stops_at_next_crossing() {
        let m = [0.0, 0.03, 0.0, 0.0, 0.0, 0.0, 0.03, 0.0, 0.0, 0.0];
        let ticks = [0, 10, 8, 6, 4, 2, 12, 6, 0, 0];
        let cfg = CrashConfig {
            peak_window: 1,
            ..Default::default()
        };
        let events = detect_crashes(&synthetic(&m, &ticks), &cfg).unwrap();
        assert_eq!(events.len(), 2);
        assert_eq!((events[0].t_peak, events[0].t_trough), (2, 6));
        assert_eq!((events[1].t_cross, events[1].t_peak), (7, 7));
        assert!(events[0].t_trough < events[1].t_cross);
    }

    #[test]
    fn peak_window_limits_search() {
        let m = [0.0, 0.03, 0.0, 0.0, 0.0, 0.0];
        let ticks = [0, 1, 2, 3, 20, 0];
        let cfg = CrashConfig {
            peak_window: 1,
            ..Default::default()
        };
        let events = detect_crashes(&synthetic(&m, &ticks), &cfg).unwrap();
        // Peak at t = 3 (2 ticks): 2-tick drawdown, below the floor.
        assert!(events.is_empty());
    }

    #[test]
    fn rejects_short_and_bad_config() {
        let traj = synthetic(&[0.0], &[0]);
        assert!(detect_crashes(&traj, &CrashConfig::default()).is_err());
        let traj = synthetic(&[0.0; 4], &[0; 4]);
        let bad = CrashConfig {
            peak_window: 0,
            ..Default::default()
        };
        assert!(detect_crashes(&traj, &bad).is_err());
        let bad = CrashConfig {
            min_drawdown: Some(0.0),
            ..Default::default()
        };
        assert!(detect_crashes(&traj, &bad).is_err());
    }

    #[test]
    fn resolve_defaults_follow_params() {
        let p = ModelParams {
            root_mid: 0.05,
            tick_size: 0.002,
            ..Default::default()
        };
        let r = CrashConfig::default().resolve(&p).unwrap();
        assert_eq!(r.threshold, 0.05);
        assert_eq!(r.min_drawdown, 0.01);
        assert_eq!(r.peak_window, 500);
    }
}

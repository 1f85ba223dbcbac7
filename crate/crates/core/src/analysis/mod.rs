//! Crash-episode detection, per-run summaries and parameter sweeps.

pub mod crash;
pub mod stats;
pub mod sweep;

pub use crash::{detect_crashes, up_crossings, CrashConfig, CrashEvent, ResolvedCrashConfig};
pub use stats::{summarize, Quartiles, StatField, SummaryStats};
pub use sweep::{
    compare_medians, run_sweep, run_sweep_with, Execution, SweepAxis, SweepCell, SweepResult,
    SweepSpec, ValueSummary,
};

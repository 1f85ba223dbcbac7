//! Discrete-time model of periodic bubbles and crashes.
//!
//! Trades arrive as Bernoulli events whose probability `Φ(Λ + k M_t)` rises
//! with the price momentum `M_t`, and each trade moves the log-price one tick
//! up or down with probability `Φ(x_t)`, where the direction state `x_t`
//! accumulates the cubic `h (M_t - a)(M_t - b)(M_t - c)`. Moderate momentum
//! feeds buying; momentum past `b` flips the cubic negative and triggers a
//! crash.
//!
//! [`model`] holds the dynamics and the seeded simulator, [`analysis`] the
//! crash detector, summaries and one-parameter sweeps.

pub mod analysis;
pub mod error;
pub mod model;

pub use error::{AnalysisError, ModelError};

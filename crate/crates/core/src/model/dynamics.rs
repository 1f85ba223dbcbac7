//! Per-step building blocks of the dynamics: momentum, trading intensity,
//! the cubic direction increment and Bernoulli draws.

use super::params::ModelParams;
use super::rng::RngStream;
use crate::error::ModelError;

/// Momentum as the explicit exponentially weighted sum of past returns.
///
/// `returns[i]` is the log-return of period `s = i + 1`, and the momentum is
/// evaluated at `t = returns.len() + 1`, so the most recent return carries
/// weight `e^{-r}`. The empty history gives zero. This is O(len) per call;
/// the simulator uses [`momentum_update`] instead.
pub fn momentum_direct(returns: &[f64], r: f64) -> f64 {
    let n = returns.len();
    returns
        .iter()
        .enumerate()
        .map(|(i, ret)| (-r * (n - i) as f64).exp() * ret)
        .sum()
}

/// One step of the momentum recursion `M_t = e^{-r} (M_{t-1} + Δ_{t-1})`.
#[inline]
pub fn momentum_update(m_prev: f64, last_return: f64, r: f64) -> f64 {
    (-r).exp() * (m_prev + last_return)
}

/// Trading intensity `λ = Λ + k·m`, unbounded before the CDF squash.
#[inline]
pub fn intensity(params: &ModelParams, m: f64) -> f64 {
    params.base_intensity + params.intensity_sensitivity * m
}

/// Direction-state increment `h (m - a)(m - b)(m - c)`.
///
/// Positive for `a < m < b`, negative for `b < m < c`.
#[inline]
pub fn cubic_increment(params: &ModelParams, m: f64) -> f64 {
    params.cubic_scale * (m - params.root_low) * (m - params.root_mid) * (m - params.root_high)
}

/// Draws one uniform and returns `true` iff it falls below `p`.
pub fn bernoulli(p: f64, rng: &mut RngStream) -> Result<bool, ModelError> {
    check_probability(p)?;
    Ok(bernoulli_threshold(p, rng.uniform()))
}

/// The threshold rule behind [`bernoulli`], for a given uniform `u`.
#[inline]
pub fn bernoulli_threshold(p: f64, u: f64) -> bool {
    u < p
}

fn check_probability(p: f64) -> Result<(), ModelError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ModelError::domain(
            "bernoulli",
            format!("probability must lie in [0, 1], got {p}"),
        ))
    }
}

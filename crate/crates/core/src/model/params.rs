use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Scalar parameters of the bubble/crash dynamics, the horizon and the
/// initial conditions.
///
/// Serialized field names follow the conventional model symbols
/// (`T`, `d`, `r`, `Lambda`, `k`, `h`, `a`, `b`, `c`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Number of periods `T`; the trajectory covers `t = 1..=T`.
    #[serde(rename = "T")]
    pub periods: usize,
    /// Tick size `d` of every log-price move.
    #[serde(rename = "d")]
    pub tick_size: f64,
    /// Per-step momentum decay rate `r`.
    #[serde(rename = "r")]
    pub decay_rate: f64,
    /// Baseline trading intensity `Λ`.
    #[serde(rename = "Lambda", alias = "lambda")]
    pub base_intensity: f64,
    /// Sensitivity `k` of the trading intensity to momentum.
    #[serde(rename = "k")]
    pub intensity_sensitivity: f64,
    /// Scale `h` of the cubic direction increment.
    #[serde(rename = "h")]
    pub cubic_scale: f64,
    /// Lowest root `a` of the cubic.
    #[serde(rename = "a")]
    pub root_low: f64,
    /// Middle root `b`: the crash threshold.
    #[serde(rename = "b")]
    pub root_mid: f64,
    /// Highest root `c` of the cubic.
    #[serde(rename = "c")]
    pub root_high: f64,
    pub log_p0: f64,
    pub x0: f64,
}

impl Default for ModelParams {
    /// The baseline calibration: `T = 5000`, `d = 0.01`, `r = 0.001`,
    /// `Λ = -2`, `k = 10`, `h = 0.2`, `(a, b, c) = (-1, 0.02, 1)`.
    fn default() -> Self {
        ModelParams {
            periods: 5000,
            tick_size: 0.01,
            decay_rate: 0.001,
            base_intensity: -2.0,
            intensity_sensitivity: 10.0,
            cubic_scale: 0.2,
            root_low: -1.0,
            root_mid: 0.02,
            root_high: 1.0,
            log_p0: 0.0,
            x0: 0.0,
        }
    }
}

impl ModelParams {
    /// Checks every model constraint, returning the first violation.
    pub fn validate(&self) -> Result<(), ModelError> {
        let named = [
            ("d", self.tick_size),
            ("r", self.decay_rate),
            ("Lambda", self.base_intensity),
            ("k", self.intensity_sensitivity),
            ("h", self.cubic_scale),
            ("a", self.root_low),
            ("b", self.root_mid),
            ("c", self.root_high),
            ("log_p0", self.log_p0),
            ("x0", self.x0),
        ];
        if let Some((name, v)) = named.iter().find(|(_, v)| !v.is_finite()) {
            return Err(ModelError::InvalidParams(format!(
                "{name} must be finite, got {v}"
            )));
        }
        if self.periods < 2 {
            return Err(ModelError::InvalidParams(format!(
                "requires T >= 2, got T = {}",
                self.periods
            )));
        }
        for (name, v) in [
            ("d", self.tick_size),
            ("r", self.decay_rate),
            ("k", self.intensity_sensitivity),
            ("h", self.cubic_scale),
        ] {
            if v <= 0.0 {
                return Err(ModelError::InvalidParams(format!(
                    "requires {name} > 0, got {name} = {v}"
                )));
            }
        }
        if !(self.root_low < self.root_mid && self.root_mid < self.root_high) {
            return Err(ModelError::InvalidParams(format!(
                "requires a < b < c, got a = {}, b = {}, c = {}",
                self.root_low, self.root_mid, self.root_high
            )));
        }
        Ok(())
    }

    /// Consumes `self` and returns it if valid.
    pub fn validated(self) -> Result<Self, ModelError> {
        self.validate().map(|()| self)
    }
}

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::ModelError;

/// Standard normal CDF `Φ(z)`.
///
/// Evaluated through the complementary error function on the lower tail
/// (`Φ(z) = erfc(-z/√2) / 2` for `z <= 0`) and reflected for `z > 0`, so
/// `Φ(z) + Φ(-z) = 1` up to a single rounding.
pub fn normal_cdf(z: f64) -> Result<f64, ModelError> {
    if !z.is_finite() {
        return Err(ModelError::domain(
            "normal_cdf",
            format!("argument must be finite, got {z}"),
        ));
    }
    Ok(if z <= 0.0 {
        lower_tail(z)
    } else {
        1.0 - lower_tail(-z)
    })
}

#[inline]
fn lower_tail(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

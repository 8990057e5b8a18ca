//! Fixed decimal formatting for CSV output.
//!
//! All floating-point values written to output files go through
//! [`format_real`], which renders 12 significant digits in plain decimal.
//! Rust's float-to-decimal conversion is correctly rounded and
//! platform-independent, so identical inputs always produce identical bytes.

use crate::scalar::Real;

/// Render `value` with 12 significant digits.
pub fn format_real<F: Real>(value: F) -> String {
    let mut x = value.as_f64();
    if x == 0.0 {
        x = 0.0; // normalize -0.0
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.000000000000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    // 12 significant digits -> decimals after the point.
    let decimals = (11 - magnitude).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_real(0.25f64), "0.250000000000");
        assert_eq!(format_real(1.0f64), "1.00000000000");
        assert_eq!(format_real(4.0f64 / 3.0), "1.33333333333");
        assert_eq!(format_real(0.0f64), "0.000000000000");
        assert_eq!(format_real(-0.0f64), "0.000000000000");
        assert_eq!(format_real(123456.0f64), "123456.000000");
    }

    #[test]
    fn small_magnitudes_stay_plain_decimal() {
        assert_eq!(format_real(1e-6f64), "0.00000100000000000");
        assert_eq!(format_real(3.5e-3f64), "0.00350000000000");
    }

    #[test]
    fn deterministic_across_calls() {
        let v = 0.874_561_234_9_f64;
        assert_eq!(format_real(v), format_real(v));
    }
}

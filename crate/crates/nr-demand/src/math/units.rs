//! Decibel and linear-scale conversions.

/// ln(10)/10, the factor turning dB into natural log units.
pub const DB_TO_NAT: f64 = core::f64::consts::LN_10 / 10.0;

/// 10^(x/10).
pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

/// 10 log10(x) for `x > 0`.
pub fn linear_to_db(x: f64) -> f64 {
    debug_assert!(x > 0.0, "dB of a non-positive quantity");
    10.0 * x.log10()
}

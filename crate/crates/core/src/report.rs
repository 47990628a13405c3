//! Deterministic number formatting for CSV and JSON artifacts.

/// 17 significant digits in scientific notation; round-trips every f64.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}

//! Locale-free numeric output with 12 significant digits.

/// Rounds to 12 significant digits and prints the shortest decimal form of
/// the rounded value, e.g. `0.1`, `2.57464338430`, `-1e-7`.
pub fn fmt12(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    format!("{rounded}")
}

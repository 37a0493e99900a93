//! Number formatting shared by the CSV writers.

/// A double with 17 significant digits, e.g. `1.2345678901234567e-3`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_bool(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

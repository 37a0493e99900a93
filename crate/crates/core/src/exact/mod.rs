//! Exact combinatorial quantities: Stirling numbers, rising factorials and
//! the Ewens probability mass function.

mod pmf;
mod stirling;

pub use pmf::{
    ewens_pmf_exact, ewens_pmf_float, mgf_ratio, rational_to_f64, ln_rising_factorial, rising_factorial_exact,
    rising_factorial_f64, ExactPmf, FloatPmf, PmfKind, PmfTable, PmfValue,
};
pub use stirling::{
    stirling_first_row, stirling_first_row_capped, stirling_second, stirling_second_table,
    StirlingPrefix, StirlingRow, DEFAULT_ROW_CAP,
};

use num_bigint::BigUint;

/// Natural logarithm of a positive big integer, to double precision.
pub fn ln_biguint(value: &BigUint) -> f64 {
    let bits = value.bits();
    if bits <= 1000 {
        return num_traits::ToPrimitive::to_f64(value).unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = num_traits::ToPrimitive::to_f64(&(value >> shift)).unwrap_or(0.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

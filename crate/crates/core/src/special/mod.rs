//! Real special functions on the positive axis: log-gamma, polygamma of any
//! practical order, and the constants that appear in the mode formulas.

mod constants;
mod gamma;
mod polygamma;

pub use constants::{
    euler_gamma, recompute_constants, zeta2, zeta3, ConstantCheck, EULER_GAMMA, ZETA2, ZETA3,
};
pub use gamma::log_gamma;
pub use polygamma::{digamma, polygamma, trigamma, PolygammaOrder, MAX_POLYGAMMA_ORDER};

use crate::error::{domain, Result};

/// Even-index Bernoulli numbers `B_2, B_4, ..., B_26`.
pub(crate) const BERNOULLI_EVEN: [f64; 13] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
];

/// `s*(theta) = theta^2/2 (2 psi'(theta) + theta psi''(theta))`.
///
/// Its sign decides which neighbour of `u_n*` wins when the fractional part
/// of `u_n*` sits just below one half.
pub fn s_star(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(domain(format!("s_star requires theta > 0, got {theta}")));
    }
    let psi1 = polygamma(1, theta)?;
    let psi2 = polygamma(2, theta)?;
    Ok(0.5 * theta * theta * (2.0 * psi1 + theta * psi2))
}

/// `s*(theta)` from the series `theta^2 sum_{k>=1} k/(theta+k)^3`.
///
/// Sums `terms` terms smallest first and closes with the midpoint integral
/// of the remainder, whose error is `O(terms^-3)`.
pub fn s_star_series(theta: f64, terms: usize) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(domain(format!("s_star requires theta > 0, got {theta}")));
    }
    let a = terms as f64 + 0.5 + theta;
    let mut sum = 1.0 / a - theta / (2.0 * a * a);
    for k in (1..=terms).rev() {
        let k = k as f64;
        let d = theta + k;
        sum += k / (d * d * d);
    }
    Ok(theta * theta * sum)
}

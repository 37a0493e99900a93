use super::BERNOULLI_EVEN;
use crate::error::{domain, Result};

const SHIFT_TO: f64 = 15.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Gamma(x)` for `x > 0`.
///
/// Shifts the argument to `x >= 15` with `Gamma(x+1) = x Gamma(x)` and then
/// evaluates the Stirling series.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(domain(format!("log_gamma requires x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut y = x;
    let mut product = 1.0;
    while y < SHIFT_TO {
        product *= y;
        y += 1.0;
    }
    let shifted = stirling_series(y);
    Ok(if product == 1.0 { shifted } else { shifted - product.ln() })
}

fn stirling_series(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut power = inv;
    let mut corr = 0.0;
    for (i, b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        let k = (i + 1) as f64;
        corr += b / (2.0 * k * (2.0 * k - 1.0)) * power;
        power *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + corr
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_and_half_integer_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
        let half = 0.5 * std::f64::consts::PI.ln();
        assert!((log_gamma(0.5).unwrap() - half).abs() < 1e-14);
        // Gamma(171) = 170!
        let ln_fact: f64 = (2..=170).map(|k| (k as f64).ln()).sum();
        assert!(((log_gamma(171.0).unwrap() - ln_fact) / ln_fact).abs() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn sqrt_pi_by_quadrature() {
        // Gamma(1/2) = int_0^inf t^{-1/2} e^{-t} dt = 2 int_0^inf e^{-u^2} du
        let h = 1e-4;
        let integral: f64 = (0..100_000).map(|i| (-((i as f64 + 0.5) * h).powi(2)).exp() * h).sum();
        let gamma_half = 2.0 * integral;
        assert!((log_gamma(0.5).unwrap() - gamma_half.ln()).abs() < 1e-8);
    }

    #[test]
    fn recurrence_holds() {
        for &x in &[0.01, 0.3, 1.7, 9.2, 14.5, 33.3, 250.0] {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + x.ln();
            assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0), "x = {x}");
        }
    }
}

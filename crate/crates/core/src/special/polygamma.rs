use super::BERNOULLI_EVEN;
use crate::error::{domain, Result};

/// Highest polygamma order accepted. Expansion orders up to 13 need it.
pub const MAX_POLYGAMMA_ORDER: u32 = 12;

/// Order `m` of `psi^(m)`; `m = 0` is the digamma function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PolygammaOrder(u32);

impl PolygammaOrder {
    pub fn new(m: u32) -> Result<Self> {
        if m > MAX_POLYGAMMA_ORDER {
            return Err(domain(format!(
                "polygamma order {m} exceeds the supported maximum {MAX_POLYGAMMA_ORDER}"
            )));
        }
        Ok(Self(m))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

pub fn digamma(x: f64) -> Result<f64> {
    polygamma(0, x)
}

pub fn trigamma(x: f64) -> Result<f64> {
    polygamma(1, x)
}

/// `psi^(m)(x) = (d/dx)^(m+1) ln Gamma(x)` for `x > 0`.
///
/// The argument is shifted upward with
/// `psi^(m)(x) = psi^(m)(x+1) - (-1)^m m! / x^(m+1)` until the asymptotic
/// series in `1/x` converges to double precision, then the shift terms are
/// added back smallest first.
pub fn polygamma(m: u32, x: f64) -> Result<f64> {
    let m = PolygammaOrder::new(m)?.get();
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("polygamma requires finite x > 0, got {x}")));
    }
    let threshold = 20.0 + m as f64;
    let steps = if x >= threshold { 0 } else { (threshold - x).ceil() as usize };
    let shifted = x + steps as f64;
    let mut value = asymptotic(m, shifted);
    // (-1)^m m! sum_{i<steps} (x+i)^-(m+1), subtracted
    let m_fact: f64 = (1..=m).map(f64::from).product();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let mut shift_sum = 0.0;
    for i in (0..steps).rev() {
        shift_sum += (x + i as f64).powi(-(m as i32 + 1));
    }
    value -= sign * m_fact * shift_sum;
    Ok(value)
}

fn asymptotic(m: u32, x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    if m == 0 {
        let mut series = 0.0;
        let mut power = inv2;
        for (i, b) in BERNOULLI_EVEN.iter().enumerate() {
            let k = (i + 1) as f64;
            series += b / (2.0 * k) * power;
            power *= inv2;
        }
        return x.ln() - 0.5 * inv - series;
    }
    let mf = m as f64;
    // (m-1)!/x^m + m!/(2 x^(m+1)) + sum_k B_2k (2k+m-1)!/(2k)! / x^(2k+m)
    let m1_fact: f64 = (1..m).map(f64::from).product();
    let inv_m = inv.powi(m as i32);
    let mut total = m1_fact * inv_m + 0.5 * m1_fact * mf * inv_m * inv;
    // ratio (2k+m-1)!/(2k)! built incrementally from k = 1: (m+1)!/2! * ...
    let mut ratio = m1_fact * mf * (mf + 1.0) / 2.0; // (m+1)!/2!
    let mut power = inv_m * inv2;
    for (i, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b * ratio * power;
        total += term;
        let k = (i + 1) as f64;
        // advance (2k+m-1)!/(2k)! to (2k+m+1)!/(2k+2)!
        ratio *= (2.0 * k + mf) * (2.0 * k + mf + 1.0) / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        power *= inv2;
    }
    if m % 2 == 1 {
        total
    } else {
        -total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{log_gamma, EULER_GAMMA, ZETA2, ZETA3};

    /// `(-1)^(m+1) m! sum_{k>=0} (x+k)^-(m+1)` by direct summation plus integral tail.
    fn series_oracle(m: u32, x: f64) -> f64 {
        let terms = 1_000_000;
        let p = (m + 1) as i32;
        let a = x + terms as f64 - 0.5;
        let mut sum = a.powi(1 - p) / (p - 1) as f64;
        for k in (0..terms).rev() {
            sum += (x + k as f64).powi(-p);
        }
        let m_fact: f64 = (1..=m).map(f64::from).product();
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        sign * m_fact * sum
    }

    #[test]
    fn known_values() {
        assert!((polygamma(0, 1.0).unwrap() + EULER_GAMMA).abs() < 1e-13);
        assert!((polygamma(1, 1.0).unwrap() - ZETA2).abs() < 1e-13);
        assert!((polygamma(2, 1.0).unwrap() + 2.0 * ZETA3).abs() < 1e-13);
        // psi(1/2) = -gamma - 2 ln 2
        let expect = -EULER_GAMMA - 2.0 * std::f64::consts::LN_2;
        assert!((digamma(0.5).unwrap() - expect).abs() < 1e-13);
        // psi'(1/2) = pi^2/2
        assert!((trigamma(0.5).unwrap() - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn matches_series_oracle() {
        for m in 1..=4 {
            for &x in &[0.1, 0.7, 1.0, 3.3, 12.0, 100.0] {
                let got = polygamma(m, x).unwrap();
                let want = series_oracle(m, x);
                assert!(
                    (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                    "m = {m}, x = {x}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn recurrence_residual() {
        for m in 0..=6u32 {
            let m_fact: f64 = (1..=m).map(f64::from).product();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            for &x in &[0.5, 1.0, 2.5, 7.0] {
                let lhs = polygamma(m, x + 1.0).unwrap() - polygamma(m, x).unwrap();
                let rhs = sign * m_fact / x.powi(m as i32 + 1);
                assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0), "m = {m}, x = {x}");
            }
        }
    }

    #[test]
    fn digamma_is_log_gamma_derivative() {
        let h = 1e-5;
        let mut x = 0.5;
        while x <= 10.0 {
            let fd = (log_gamma(x + h).unwrap() - log_gamma(x - h).unwrap()) / (2.0 * h);
            assert!((fd - digamma(x).unwrap()).abs() < 1e-8, "x = {x}");
            x += 0.25;
        }
    }

    #[test]
    fn high_orders_by_finite_difference() {
        // psi^(m) from central differences of psi^(m-1)
        for m in 1..=MAX_POLYGAMMA_ORDER {
            for &x in &[1.5, 4.0, 30.0] {
                let h = 1e-4 * x;
                let fd = (polygamma(m - 1, x + h).unwrap() - polygamma(m - 1, x - h).unwrap()) / (2.0 * h);
                let got = polygamma(m, x).unwrap();
                assert!(((fd - got) / got).abs() < 1e-6, "m = {m}, x = {x}: {got} vs {fd}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(polygamma(0, 0.0).is_err());
        assert!(polygamma(1, -1.0).is_err());
        assert!(polygamma(MAX_POLYGAMMA_ORDER + 1, 1.0).is_err());
    }
}

//! Edgeworth expansion of the Ewens distribution.
//!
//! With `w = theta ln n` and `x = (k - w)/sqrt(w)`,
//!
//! ```text
//! P{K_n = k} ~ e^{-x^2/2} / sqrt(2 pi w) * sum_j H_j(x) / w^{j/2}
//! ```
//!
//! where `H_j = (-1)^j/j! e^{x^2/2} B_j(D~_1, ..., D~_j) e^{-x^2/2}` and
//! `D~_j = D^{j+2}/((j+1)(j+2)) + chi~_j D^j`. The Bell polynomial is
//! evaluated in the ring of constant-coefficient operators, then each
//! `D^l` acting on the Gaussian becomes a Hermite polynomial.

mod bell;
mod hermite;
mod operator;
mod poly;
pub mod sweep;

use std::f64::consts::PI;
use std::io::{self, Write};

pub use bell::{bell_combination, bell_polynomials};
pub use hermite::{hermite, hermite_table};
pub use operator::OperatorPolynomial;
pub use poly::{Coefficient, Polynomial, Ring, XPolynomial};

use crate::error::{domain, Result};
use crate::exact::stirling_second_table;
use crate::special::{digamma, log_gamma, polygamma, MAX_POLYGAMMA_ORDER};

/// Highest `j` for which `chi~_j` (and hence `H_j`) can be formed.
pub const MAX_ORDER: usize = MAX_POLYGAMMA_ORDER as usize + 1;

/// Default half-width factor of the large-deviation window.
pub const DEFAULT_ETA: f64 = 4.0;

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("theta must be positive and finite, got {theta}")))
    }
}

/// `chi~_j(0)` for `j = 1..=j_max` at a fixed `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiTable {
    theta: f64,
    values: Vec<f64>,
}

impl ChiTable {
    /// `chi~_j(0) = -sum_{l=1}^{j} {j l} psi^(l-1)(theta) theta^l`.
    pub fn new(theta: f64, j_max: usize) -> Result<Self> {
        check_theta(theta)?;
        if j_max > MAX_ORDER {
            return Err(domain(format!("expansion order {j_max} exceeds {MAX_ORDER}")));
        }
        let s2 = stirling_second_table(j_max);
        let psi = (0..j_max)
            .map(|m| polygamma(m as u32, theta))
            .collect::<Result<Vec<_>>>()?;
        let values = (1..=j_max)
            .map(|j| {
                let mut theta_pow = 1.0;
                -(1..=j)
                    .map(|l| {
                        theta_pow *= theta;
                        let s = num_traits::ToPrimitive::to_f64(&s2[j][l]).unwrap_or(f64::INFINITY);
                        s * psi[l - 1] * theta_pow
                    })
                    .sum::<f64>()
            })
            .collect();
        Ok(Self { theta, values })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `chi~_j(0)` for `j >= 1`.
    pub fn get(&self, j: usize) -> Option<f64> {
        j.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn chi_tilde(j: usize, theta: f64) -> Result<f64> {
    if j == 0 {
        return Err(domain("chi_tilde is defined for j >= 1"));
    }
    Ok(ChiTable::new(theta, j)?.values[j - 1])
}

/// The operators `D~_1, ..., D~_{j_max}`.
pub fn cumulant_operators(chi: &ChiTable) -> Vec<OperatorPolynomial> {
    chi.values()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let j = i + 1;
            let mut coeffs = vec![0.0; j + 3];
            coeffs[j + 2] = 1.0 / ((j + 1) * (j + 2)) as f64;
            coeffs[j] = c;
            OperatorPolynomial::new(coeffs)
        })
        .collect()
}

/// `H_0, ..., H_r` at `theta`.
pub fn correction_polynomials(theta: f64, r: usize) -> Result<Vec<Polynomial<f64>>> {
    let chi = ChiTable::new(theta, r)?;
    let ops = cumulant_operators(&chi);
    let bells = bell_polynomials(&ops, r);
    let hermite: Vec<Polynomial<f64>> = hermite_table(3 * r).iter().map(Polynomial::to_f64).collect();
    let mut factorial = 1.0;
    Ok(bells
        .iter()
        .enumerate()
        .map(|(j, b)| {
            if j > 0 {
                factorial *= j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            b.scale(sign / factorial).conjugate_gaussian(&hermite)
        })
        .collect())
}

/// `H_j(x, theta)`, a polynomial of degree `3j` with the parity of `j`.
#[allow(non_snake_case)]
pub fn compute_H(j: usize, theta: f64) -> Result<Polynomial<f64>> {
    Ok(correction_polynomials(theta, j)?.pop().expect("j + 1 polynomials"))
}

/// Writes `H_j` coefficients as CSV with header `j,power,coefficient`.
///
/// One row per non-zero monomial.
pub fn write_correction_csv<W: Write>(mut out: W, polys: &[(usize, &Polynomial<f64>)]) -> io::Result<()> {
    writeln!(out, "j,power,coefficient")?;
    for (j, poly) in polys {
        for (power, &c) in poly.coeffs().iter().enumerate() {
            if c != 0.0 {
                writeln!(out, "{j},{power},{}", crate::csv::fmt_f64(c))?;
            }
        }
    }
    Ok(())
}

/// Lattice point `k` at sample size `n`, with `w_n = theta ln n` and
/// `x = (k - w_n)/sqrt(w_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionPoint {
    pub n: usize,
    pub k: i64,
    pub theta: f64,
    pub w_n: f64,
    pub x: f64,
}

impl ExpansionPoint {
    pub fn new(n: usize, k: i64, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        if n < 2 {
            return Err(domain(format!("expansion needs n >= 2 (theta ln n > 0), got n = {n}")));
        }
        let w_n = theta * (n as f64).ln();
        Ok(Self {
            n,
            k,
            theta,
            w_n,
            x: (k as f64 - w_n) / w_n.sqrt(),
        })
    }
}

/// Precomputed `H_0..H_r` for repeated evaluation at one `theta`.
#[derive(Debug, Clone)]
pub struct EdgeworthExpansion {
    theta: f64,
    polys: Vec<Polynomial<f64>>,
}

impl EdgeworthExpansion {
    pub fn new(theta: f64, r: usize) -> Result<Self> {
        Ok(Self {
            theta,
            polys: correction_polynomials(theta, r)?,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn polynomials(&self) -> &[Polynomial<f64>] {
        &self.polys
    }

    pub fn point(&self, n: usize, k: i64) -> Result<ExpansionPoint> {
        ExpansionPoint::new(n, k, self.theta)
    }

    /// Expansion values truncated after `j = 0, 1, ..., order`.
    pub fn partial_sums(&self, point: &ExpansionPoint) -> Vec<f64> {
        let kernel = (-0.5 * point.x * point.x).exp() / (2.0 * PI * point.w_n).sqrt();
        let inv_sqrt_w = 1.0 / point.w_n.sqrt();
        let mut scale = 1.0;
        let mut acc = 0.0;
        self.polys
            .iter()
            .map(|h| {
                acc += h.eval_f64(point.x) * scale;
                scale *= inv_sqrt_w;
                kernel * acc
            })
            .collect()
    }

    /// The full-order expansion at `point`.
    pub fn eval(&self, point: &ExpansionPoint) -> f64 {
        *self.partial_sums(point).last().expect("order >= 0")
    }
}

/// `r`-term Edgeworth approximation of `P{K_n = k}`. Not clamped to `[0, 1]`.
pub fn edgeworth_pmf(point: &ExpansionPoint, r: usize) -> Result<f64> {
    Ok(EdgeworthExpansion::new(point.theta, r)?.eval(point))
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// One-term corrected approximation of `P{(K_n - w)/sqrt(w) <= x}`:
/// `Phi(x) + e^{-x^2/2}/sqrt(2 pi w) (1/2 - (x^2-1)/6 + theta psi(theta))`.
///
/// The `1/2` is the Euler–Maclaurin boundary term, so `x` is meant to be a
/// lattice point `(k - w)/sqrt(w)`.
pub fn edgeworth_cdf(n: usize, theta: f64, x: f64) -> Result<f64> {
    let point = ExpansionPoint::new(n, 0, theta)?;
    let theta_psi = theta * digamma(theta)?;
    Ok(cdf_with(point.w_n, theta_psi, x))
}

/// [`edgeworth_cdf`] at the lattice point of integer `k`.
pub fn edgeworth_cdf_at(n: usize, theta: f64, k: i64) -> Result<f64> {
    let point = ExpansionPoint::new(n, k, theta)?;
    edgeworth_cdf(n, theta, point.x)
}

pub(crate) fn cdf_with(w: f64, theta_psi: f64, x: f64) -> f64 {
    let correction = 0.5 - (x * x - 1.0) / 6.0 + theta_psi;
    normal_cdf(x) + (-0.5 * x * x).exp() / (2.0 * PI * w).sqrt() * correction
}

/// Approximation of `[n k] / n!` with `theta = k / ln n`:
///
/// ```text
/// n^{theta - theta ln theta - 1} / Gamma(theta) / sqrt(2 pi k) * sum_{s<=q} H_{2s}(0, theta) / k^s
/// ```
///
/// Only even-index terms appear because `H_{2s+1}(0) = 0`. Valid for
/// `ln n / eta < k < eta ln n`.
pub fn large_deviation_density(n: usize, k: usize, q: usize, eta: f64) -> Result<f64> {
    let (theta, h0) = large_deviation_setup(n, k, q, eta)?;
    let nf = n as f64;
    let kf = k as f64;
    let log_prefactor = (theta - theta * theta.ln() - 1.0) * nf.ln() - log_gamma(theta)?;
    let mut series = 0.0;
    let mut k_pow = 1.0;
    for s in 0..=q {
        series += h0[2 * s] / k_pow;
        k_pow *= kf;
    }
    Ok(log_prefactor.exp() / (2.0 * PI * kf).sqrt() * series)
}

fn large_deviation_setup(n: usize, k: usize, q: usize, eta: f64) -> Result<(f64, Vec<f64>)> {
    if n < 3 {
        return Err(domain(format!("large deviation expansion needs n >= 3, got {n}")));
    }
    if !(eta > 1.0) {
        return Err(domain(format!("window factor eta must exceed 1, got {eta}")));
    }
    let ln_n = (n as f64).ln();
    let kf = k as f64;
    if !(kf > ln_n / eta && kf < eta * ln_n) {
        return Err(domain(format!(
            "k = {k} outside the window ({:.4}, {:.4}) for n = {n}, eta = {eta}",
            ln_n / eta,
            eta * ln_n
        )));
    }
    let theta = kf / ln_n;
    let h0 = correction_polynomials(theta, 2 * q)?
        .iter()
        .map(|h| h.coeff(0))
        .collect();
    Ok((theta, h0))
}

use std::io::{self, Write};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::stirling::stirling_first_row;
use crate::error::{domain, invalid, Result};
use crate::special::log_gamma;
use crate::theta::{RationalTheta, Theta};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmfKind {
    Exact,
    Float,
}

/// Probability value stored in a [`PmfTable`].
pub trait PmfValue: Clone {
    const KIND: PmfKind;

    /// CSV field: `p/q` for exact values, 17 significant digits for floats.
    fn csv_field(&self) -> String;
}

impl PmfValue for BigRational {
    const KIND: PmfKind = PmfKind::Exact;

    fn csv_field(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

impl PmfValue for f64 {
    const KIND: PmfKind = PmfKind::Float;

    fn csv_field(&self) -> String {
        crate::csv::fmt_f64(*self)
    }
}

/// Ewens probabilities `P{K_n = k}` for `k = 1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfTable<P> {
    n: usize,
    theta: Theta,
    probs: Vec<P>,
}

pub type ExactPmf = PmfTable<BigRational>;
pub type FloatPmf = PmfTable<f64>;

impl<P: PmfValue> PmfTable<P> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn kind(&self) -> PmfKind {
        P::KIND
    }

    /// `P{K_n = k}`; `None` outside `1..=n`.
    pub fn prob(&self, k: usize) -> Option<&P> {
        if k == 0 {
            None
        } else {
            self.probs.get(k - 1)
        }
    }

    /// Probabilities in order `k = 1..=n`.
    pub fn probs(&self) -> &[P] {
        &self.probs
    }

    /// Writes the table as CSV with header `k,prob`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,prob")?;
        for (i, p) in self.probs.iter().enumerate() {
            writeln!(out, "{},{}", i + 1, p.csv_field())?;
        }
        Ok(())
    }
}

impl PmfTable<BigRational> {
    pub fn sum(&self) -> BigRational {
        self.probs.iter().fold(BigRational::zero(), |acc, p| acc + p)
    }

    /// `p_k^2 >= p_{k-1} p_{k+1}` for all interior `k`.
    pub fn is_log_concave(&self) -> bool {
        self.probs
            .windows(3)
            .all(|w| &w[1] * &w[1] >= &w[0] * &w[2])
    }

    pub fn to_float(&self) -> PmfTable<f64> {
        PmfTable {
            n: self.n,
            theta: self.theta,
            probs: self.probs.iter().map(rational_to_f64).collect(),
        }
    }
}

impl PmfTable<f64> {
    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d = (i + 1) as f64 - mean;
                d * d * p
            })
            .sum()
    }

    /// `sum_k e^(beta k) P{K_n = k}` by direct summation.
    pub fn moment_generating(&self, beta: f64) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(i, p)| (beta * (i + 1) as f64 + p.ln()).exp())
            .sum()
    }

    /// `P{K_n <= k}` for `k = 1..=n`.
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect()
    }

    /// Least `k` attaining the maximum, together with the maximum.
    pub fn argmax(&self) -> (usize, f64) {
        let mut best = (1, f64::NEG_INFINITY);
        for (i, &p) in self.probs.iter().enumerate() {
            if p > best.1 {
                best = (i + 1, p);
            }
        }
        best
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() && (x != 0.0 || r.is_zero()) {
            return x;
        }
    }
    // Far outside the double range: go through logarithms.
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    sign * (super::ln_biguint(num) - super::ln_biguint(den)).exp()
}

/// `x (x+1) ... (x+n-1)`; the empty product is 1.
pub fn rising_factorial_exact(x: &BigRational, n: usize) -> BigRational {
    let mut acc = BigRational::one();
    let mut term = x.clone();
    let one = BigRational::one();
    for _ in 0..n {
        acc *= &term;
        term += &one;
    }
    acc
}

/// `x^(n)` in double precision.
///
/// Direct product for `n <= 170`, `exp(lnGamma(x+n) - lnGamma(x))` beyond.
/// Overflow of the double range is reported as an error.
pub fn rising_factorial_f64(x: f64, n: usize) -> Result<f64> {
    let value = if n <= 170 || x <= 0.0 {
        (0..n).map(|i| x + i as f64).product()
    } else {
        ln_rising_factorial(x, n)?.exp()
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(domain(format!("rising factorial ({x})^({n}) overflows a double")))
    }
}

/// `ln x^(n) = lnGamma(x+n) - lnGamma(x)` for `x > 0`.
pub fn ln_rising_factorial(x: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    Ok(log_gamma(x + n as f64)? - log_gamma(x)?)
}

/// Exact PMF `theta^k [n k] / theta^(n)` for rational `theta = p/q`.
///
/// Written over the common denominator `prod_{i<n} (p + i q)`, the weight of
/// `k` is `p^k q^(n-k) [n k]`.
pub fn ewens_pmf_exact(n: usize, theta: RationalTheta) -> Result<ExactPmf> {
    if n == 0 {
        return Err(invalid("ewens_pmf_exact requires n >= 1"));
    }
    let row = stirling_first_row(n)?;
    let p = BigUint::from(theta.numer());
    let q = BigUint::from(theta.denom());
    let denom: BigUint = (0..n as u64)
        .map(|i| BigUint::from(theta.numer()) + BigUint::from(theta.denom()) * i)
        .product();
    let denom = BigInt::from(denom);
    let mut p_pow = BigUint::one();
    let mut q_pows = Vec::with_capacity(n);
    let mut qp = BigUint::one();
    for _ in 0..n {
        q_pows.push(qp.clone());
        qp *= &q;
    }
    let probs = row
        .values()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let k = i + 1;
            p_pow *= &p;
            let weight = &p_pow * &q_pows[n - k] * s;
            BigRational::new(BigInt::from(weight), denom.clone())
        })
        .collect();
    Ok(PmfTable {
        n,
        theta: Theta::Rational(theta),
        probs,
    })
}

/// Float PMF from `K_n = xi_1 + ... + xi_n`, `xi_i ~ Bern(theta/(theta+i-1))`.
///
/// Convolves one Bernoulli factor at a time. Entries that fall below the
/// smallest normal double are flushed to zero and dropped from the active
/// range, so the work is `O(n * support)` rather than `O(n^2)`.
pub fn ewens_pmf_float(n: usize, theta: f64) -> Result<FloatPmf> {
    let mut conv = BernoulliConvolution::new(theta)?;
    if n == 0 {
        return Err(invalid("ewens_pmf_float requires n >= 1"));
    }
    while conv.n() < n {
        conv.push_next();
    }
    Ok(conv.to_pmf())
}

/// Running distribution of `xi_1 + ... + xi_n`.
#[derive(Debug, Clone)]
pub(crate) struct BernoulliConvolution {
    theta: f64,
    n: usize,
    // dist[c] = P{sum = c} for c in lo..=hi; zero outside
    dist: Vec<f64>,
    lo: usize,
    hi: usize,
}

impl BernoulliConvolution {
    pub(crate) fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(invalid(format!("theta must be positive and finite, got {theta}")));
        }
        // xi_1 ~ Bern(1)
        Ok(Self {
            theta,
            n: 1,
            dist: vec![0.0, 1.0],
            lo: 1,
            hi: 1,
        })
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }

    /// Adds `xi_{n+1} ~ Bern(theta/(theta+n))`.
    pub(crate) fn push_next(&mut self) {
        let denom = self.theta + self.n as f64;
        let p = self.theta / denom;
        let q = self.n as f64 / denom;
        if self.dist.len() <= self.hi + 1 {
            self.dist.push(0.0);
        }
        let d = &mut self.dist;
        for c in (self.lo + 1..=self.hi + 1).rev() {
            d[c] = p.mul_add(d[c - 1], q * d[c]);
        }
        d[self.lo] *= q;
        self.hi += 1;
        self.n += 1;
        while self.hi > self.lo && d[self.hi] < f64::MIN_POSITIVE {
            d[self.hi] = 0.0;
            self.hi -= 1;
        }
        while self.lo < self.hi && d[self.lo] < f64::MIN_POSITIVE {
            d[self.lo] = 0.0;
            self.lo += 1;
        }
    }

    pub(crate) fn to_pmf(&self) -> FloatPmf {
        let mut probs = vec![0.0; self.n];
        probs[self.lo - 1..self.hi].copy_from_slice(&self.dist[self.lo..=self.hi]);
        PmfTable {
            n: self.n,
            theta: Theta::Float(self.theta),
            probs,
        }
    }
}

/// `E e^(beta K_n) = (theta e^beta)^(n) / theta^(n)`, evaluated as
/// `exp(lnGamma(theta e^beta + n) + lnGamma(theta) - lnGamma(theta e^beta) - lnGamma(theta + n))`.
pub fn mgf_ratio(n: usize, theta: f64, beta: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("mgf_ratio requires n >= 1"));
    }
    if !(theta > 0.0 && theta.is_finite() && beta.is_finite()) {
        return Err(invalid(format!("mgf_ratio requires theta > 0 and finite beta, got ({theta}, {beta})")));
    }
    if beta == 0.0 {
        return Ok(1.0);
    }
    let tilted = theta * beta.exp();
    let nf = n as f64;
    let log_ratio =
        log_gamma(tilted + nf)? - log_gamma(theta + nf)? + log_gamma(theta)? - log_gamma(tilted)?;
    Ok(log_ratio.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn theta(p: u64, q: u64) -> RationalTheta {
        RationalTheta::new(p, q).unwrap()
    }

    #[test]
    fn rising_factorial_examples() {
        assert_eq!(rising_factorial_exact(&rat(1, 1), 5), rat(120, 1));
        assert_eq!(rising_factorial_exact(&rat(2, 3), 3), rat(80, 27));
        assert_eq!(rising_factorial_exact(&rat(7, 5), 0), rat(1, 1));
        assert_eq!(rising_factorial_f64(1.0, 5).unwrap(), 120.0);
        assert_eq!(rising_factorial_f64(0.3, 0).unwrap(), 1.0);
        let fact170: f64 = (1..=170).map(|i| i as f64).product();
        assert_eq!(rising_factorial_f64(1.0, 170).unwrap(), fact170);
        assert!(rising_factorial_f64(1.0, 171).is_err());
        assert!(rising_factorial_f64(2.0, 400).is_err());
    }

    #[test]
    fn lgamma_route_matches_product() {
        let direct: f64 = (0..170).map(|i| 0.75 + i as f64).product();
        let via_lgamma = ln_rising_factorial(0.75, 170).unwrap().exp();
        assert!((direct / via_lgamma - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_examples() {
        let pmf = ewens_pmf_exact(3, theta(2, 3)).unwrap();
        assert_eq!(pmf.probs(), &[rat(9, 20), rat(9, 20), rat(1, 10)]);
        let pmf = ewens_pmf_exact(1, theta(7, 2)).unwrap();
        assert_eq!(pmf.probs(), &[rat(1, 1)]);
        let pmf = ewens_pmf_exact(4, theta(1, 1)).unwrap();
        assert_eq!(pmf.probs(), &[rat(6, 24), rat(11, 24), rat(6, 24), rat(1, 24)]);
        assert_eq!(pmf.kind(), PmfKind::Exact);
        assert!(ewens_pmf_exact(0, theta(1, 1)).is_err());
    }

    #[test]
    fn exact_normalization_and_log_concavity() {
        for &(p, q) in &[(1, 1), (1, 2), (2, 3), (3, 1)] {
            for n in [1, 2, 5, 17, 40] {
                let pmf = ewens_pmf_exact(n, theta(p, q)).unwrap();
                assert!(pmf.sum().is_one(), "n = {n}, theta = {p}/{q}");
                assert!(pmf.is_log_concave());
            }
        }
    }

    #[test]
    fn float_examples() {
        assert_eq!(ewens_pmf_float(1, 0.7).unwrap().probs(), &[1.0]);
        let exact = ewens_pmf_exact(50, theta(1, 1)).unwrap().to_float();
        let float = ewens_pmf_float(50, 1.0).unwrap();
        let dev = exact
            .probs()
            .iter()
            .zip(float.probs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dev <= 1e-13, "{dev}");
        assert_eq!(float.kind(), PmfKind::Float);
    }

    #[test]
    fn float_mean_and_variance() {
        let n = 1000;
        let theta = 2.0;
        let pmf = ewens_pmf_float(n, theta).unwrap();
        let ps: Vec<f64> = (1..=n).map(|i| theta / (theta + i as f64 - 1.0)).collect();
        let mean: f64 = ps.iter().sum();
        let var: f64 = ps.iter().map(|p| p * (1.0 - p)).sum();
        assert!((pmf.mean() - mean).abs() < 1e-10);
        assert!((pmf.variance() - var).abs() < 1e-9);
        assert!((pmf.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn float_rejects_bad_input() {
        assert!(ewens_pmf_float(0, 1.0).is_err());
        assert!(ewens_pmf_float(5, 0.0).is_err());
        assert!(ewens_pmf_float(5, f64::NAN).is_err());
    }

    #[test]
    fn mgf_examples() {
        assert_eq!(mgf_ratio(10, 1.3, 0.0).unwrap(), 1.0);
        // (4/3)^(3) / (2/3)^(3) = 7/2
        let v = mgf_ratio(3, 2.0 / 3.0, std::f64::consts::LN_2).unwrap();
        assert!((v - 3.5).abs() < 1e-12);
        let pmf = ewens_pmf_float(100, 1.0).unwrap();
        let direct = pmf.moment_generating(0.5);
        let ratio = mgf_ratio(100, 1.0, 0.5).unwrap();
        assert!(((direct - ratio) / ratio).abs() < 1e-9);
    }

    #[test]
    fn csv_formats() {
        let mut buf = Vec::new();
        ewens_pmf_exact(3, theta(2, 3)).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "k,prob\n1,9/20\n2,9/20\n3,1/10\n");
        let mut buf = Vec::new();
        ewens_pmf_float(2, 1.0).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "k,prob\n1,5.0000000000000000e-1\n2,5.0000000000000000e-1\n"
        );
    }
}

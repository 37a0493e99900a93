use std::cmp::Ordering;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exact::{ln_biguint, ln_rising_factorial, stirling_first_row, StirlingPrefix};
use crate::theta::RationalTheta;

/// Rows up to this size are scanned in full; larger rows only in a window.
pub const FULL_SCAN_LIMIT: usize = 200;

/// Half-width of the scan window in standard deviations `sqrt(theta ln n)`.
pub const WINDOW_SIGMAS: f64 = 10.0;

/// Least mode and tie flag from exact big-integer comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactMode {
    pub n: usize,
    pub mode_least: usize,
    pub unique: bool,
    /// `P{K_n = mode_least}` to double precision.
    pub max_prob: f64,
}

/// `[lo, hi]` scanned for the mode at `n`.
pub fn scan_window(n: usize, theta: f64) -> (usize, usize) {
    if n <= FULL_SCAN_LIMIT {
        return (1, n);
    }
    let w = theta * (n as f64).ln();
    let half = WINDOW_SIGMAS * w.sqrt();
    let lo = (w - half).floor().max(1.0) as usize;
    let hi = ((w + half).ceil() as usize).min(n);
    (lo, hi)
}

/// Exact modes of successive rows `n = 1, 2, ...` for a rational `theta`.
///
/// Weights `theta^k [n k]` are compared through
/// `w_{k+1} <=> w_k  iff  p [n k+1] <=> q [n k]` for `theta = p/q`, so the
/// normalizing constant never appears. Only the leading entries of each row
/// are kept (see [`StirlingPrefix`]).
#[derive(Debug, Clone)]
pub struct ModeScanner {
    theta: RationalTheta,
    prefix: StirlingPrefix,
    window_limit: usize,
}

impl ModeScanner {
    /// A scanner able to reach `n_max` without falling back to full rows.
    pub fn new(theta: RationalTheta, n_max: usize) -> Self {
        let theta_f = theta.to_f64();
        let (_, hi) = scan_window(n_max.max(FULL_SCAN_LIMIT + 1), theta_f);
        let window_limit = hi + 2;
        let limit = window_limit.max(n_max.min(FULL_SCAN_LIMIT));
        Self {
            theta,
            prefix: StirlingPrefix::new(limit),
            window_limit,
        }
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.prefix = self.prefix.with_parallel(parallel);
        self
    }

    pub fn theta(&self) -> RationalTheta {
        self.theta
    }

    pub fn n(&self) -> usize {
        self.prefix.n()
    }

    pub fn advance(&mut self) {
        self.prefix.advance();
        if self.prefix.n() > FULL_SCAN_LIMIT && self.prefix.limit() > self.window_limit {
            self.prefix.truncate(self.window_limit);
        }
    }

    pub fn advance_to(&mut self, n: usize) {
        while self.prefix.n() < n {
            self.advance();
        }
    }

    /// Mode of the current row.
    pub fn mode(&self) -> Result<ExactMode> {
        let n = self.prefix.n();
        let (lo, hi) = scan_window(n, self.theta.to_f64());
        let tracked = self.prefix.values();
        if tracked.len() >= (hi + 1).min(n) {
            if let Some((k, unique)) = scan(tracked, n, lo, hi, self.theta) {
                return Ok(self.finish(n, k, unique, &tracked[k - 1]));
            }
        }
        // Window check failed or entries missing: use the full row.
        let row = stirling_first_row(n)?;
        let (k, unique) = scan(row.values(), n, 1, n, self.theta)
            .ok_or_else(|| Error::Domain(format!("no mode found for n = {n}")))?;
        Ok(self.finish(n, k, unique, &row.values()[k - 1]))
    }

    fn finish(&self, n: usize, k: usize, unique: bool, stirling: &BigUint) -> ExactMode {
        let theta = self.theta.to_f64();
        let ln_theta = (self.theta.numer() as f64).ln() - (self.theta.denom() as f64).ln();
        let ln_norm = ln_rising_factorial(theta, n).unwrap_or(f64::NAN);
        let max_prob = (k as f64 * ln_theta + ln_biguint(stirling) - ln_norm).exp();
        ExactMode {
            n,
            mode_least: k,
            unique,
            max_prob,
        }
    }
}

/// Compares `w_{k+1}` with `w_k` (`values[k-1] = [n k]`).
fn step(values: &[BigUint], k: usize, theta: RationalTheta) -> Ordering {
    let (p, q) = (theta.numer(), theta.denom());
    let next = &values[k];
    let cur = &values[k - 1];
    if p == q {
        next.cmp(cur)
    } else {
        (next * p).cmp(&(cur * q))
    }
}

/// First `k` in `[lo, hi]` with `w_{k+1} <= w_k`, provided the weights still
/// increase into `lo`. Returns `None` when the window cannot be trusted.
fn scan(values: &[BigUint], n: usize, lo: usize, hi: usize, theta: RationalTheta) -> Option<(usize, bool)> {
    if lo > 1 && step(values, lo - 1, theta) != Ordering::Greater {
        return None;
    }
    for k in lo..hi.min(n) {
        if k >= values.len() {
            return None;
        }
        match step(values, k, theta) {
            Ordering::Greater => continue,
            Ordering::Equal => return Some((k, false)),
            Ordering::Less => return Some((k, true)),
        }
    }
    if hi == n {
        // increasing throughout
        Some((n, true))
    } else {
        None
    }
}

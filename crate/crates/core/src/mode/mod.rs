//! Mode and maximum of the Ewens distribution.
//!
//! The asymptotic mode location is `u_n* = theta ln n - theta psi(theta) - 1/2`;
//! for large `n` the mode is `floor(u_n*)` or `ceil(u_n*)`, and it equals
//! `nint(u_n*)` unless the fractional part of `u_n*` is close to one half.

mod experiments;
mod scanner;

use std::f64::consts::PI;
use std::ops::RangeInclusive;

pub use experiments::{
    bracket_threshold, counterexample_search, density_experiment, in_prefilter_band, maximum_sweep,
    mode_sweep, neighbor_difference_sweep, write_maximum_csv, write_mode_csv, write_neighbor_csv,
    BracketThreshold, CounterexampleReport, DensityReport, MaximumRow, NeighborRow,
};
pub use scanner::{scan_window, ExactMode, ModeScanner, FULL_SCAN_LIMIT, WINDOW_SIGMAS};

use crate::error::{domain, Result};
use crate::exact::{ewens_pmf_float, FloatPmf};
use crate::special::{digamma, trigamma, EULER_GAMMA, ZETA2, ZETA3};
use crate::theta::Theta;

/// Relative gap between the two largest float probabilities below which a
/// float mode decision is redone exactly.
pub const TIE_MARGIN: f64 = 1e-9;

/// Everything known about the mode of `K_n(theta)` at one `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeReport {
    pub n: usize,
    pub theta: Theta,
    /// Least maximizer `u_n(theta)`.
    pub mode_least: usize,
    pub unique: bool,
    /// `M_n(theta)`.
    pub max_prob: f64,
    pub u_star: f64,
    pub nint_u_star: i64,
    /// `{u_n*}` in `[0, 1)`.
    pub frac_u_star: f64,
    /// Distance from `u_n*` to the nearest integer.
    pub delta: f64,
    pub agrees_nint: bool,
}

impl ModeReport {
    pub fn new(n: usize, theta: Theta, mode_least: usize, unique: bool, max_prob: f64) -> Result<Self> {
        let u = u_star(n, theta.to_f64())?;
        let frac = u - u.floor();
        let nint_u = nint(u);
        let mode = mode_least as i64;
        let agrees = if unique {
            mode == nint_u
        } else {
            mode == nint_u || mode + 1 == nint_u
        };
        Ok(Self {
            n,
            theta,
            mode_least,
            unique,
            max_prob,
            u_star: u,
            nint_u_star: nint_u,
            frac_u_star: frac,
            delta: frac.min(1.0 - frac),
            agrees_nint: agrees,
        })
    }

    pub fn floor_u_star(&self) -> i64 {
        self.u_star.floor() as i64
    }

    pub fn ceil_u_star(&self) -> i64 {
        self.u_star.ceil() as i64
    }
}

/// Nearest integer, with ties going down: `nint(2.5) = 2`.
pub fn nint(x: f64) -> i64 {
    let floor = x.floor();
    if x - floor == 0.5 {
        floor as i64
    } else {
        (x + 0.5).floor() as i64
    }
}

/// `u_n*(theta) = theta ln n - theta psi(theta) - 1/2`.
pub fn u_star(n: usize, theta: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("u_star requires n >= 1"));
    }
    Ok(theta * (n as f64).ln() - theta * digamma(theta)? - 0.5)
}

/// Mode of `K_n(theta)`.
///
/// Rational `theta` is decided exactly. A float `theta` uses the float PMF;
/// if the top two probabilities are within [`TIE_MARGIN`] the decision is
/// redone exactly at the dyadic rational value of the double.
pub fn exact_mode(n: usize, theta: Theta) -> Result<ModeReport> {
    if n == 0 {
        return Err(domain("exact_mode requires n >= 1"));
    }
    match theta {
        Theta::Rational(r) => {
            let mut scanner = ModeScanner::new(r, n);
            scanner.advance_to(n);
            let m = scanner.mode()?;
            ModeReport::new(n, theta, m.mode_least, m.unique, m.max_prob)
        }
        Theta::Float(t) => {
            let pmf = ewens_pmf_float(n, t)?;
            match float_mode(&pmf) {
                Some((k, p)) => ModeReport::new(n, theta, k, true, p),
                None => {
                    let mut scanner = ModeScanner::new(theta.to_rational()?, n);
                    scanner.advance_to(n);
                    let m = scanner.mode()?;
                    ModeReport::new(n, theta, m.mode_least, m.unique, m.max_prob)
                }
            }
        }
    }
}

/// Argmax of a float PMF, or `None` when a neighbour is within the tie margin.
fn float_mode(pmf: &FloatPmf) -> Option<(usize, f64)> {
    let (k, p) = pmf.argmax();
    let near_tie = [k.wrapping_sub(1), k + 1]
        .into_iter()
        .filter_map(|j| pmf.prob(j))
        .any(|&q| (p - q).abs() <= TIE_MARGIN * p);
    (!near_tie).then_some((k, p))
}

/// Bounds on the remainder `h(n)` in Hammersley's mode formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HammersleyBounds {
    pub lower: f64,
    pub upper: f64,
}

impl HammersleyBounds {
    pub const TIGHT: Self = Self {
        lower: -1.098011,
        upper: 1.430089,
    };
    pub const LOOSE: Self = Self {
        lower: -1.1,
        upper: 1.44,
    };
}

impl Default for HammersleyBounds {
    fn default() -> Self {
        Self::TIGHT
    }
}

/// Integers attained by
/// `floor(ln n + gamma + (zeta(2)-zeta(3))/d + h/d^2)`, `d = ln n + gamma - 3/2`,
/// as `h` ranges over the open interval of `bounds`.
pub fn hammersley_window(n: usize, bounds: HammersleyBounds) -> Result<RangeInclusive<i64>> {
    if n <= 2 {
        return Err(domain(format!("Hammersley window needs n >= 3, got {n}")));
    }
    let base = (n as f64).ln() + EULER_GAMMA;
    let d = base - 1.5;
    let f = |h: f64| base + (ZETA2 - ZETA3) / d + h / (d * d);
    let lo = f(bounds.lower).floor() as i64;
    let hi = f(bounds.upper).ceil() as i64 - 1;
    Ok(lo..=hi)
}

/// Predicted `M_n(theta)`:
/// `(1 + (theta psi + theta^2 psi' + 1/12 - delta_n^2)/(2 w)) / sqrt(2 pi w)`.
pub fn maximum_prediction(n: usize, theta: f64) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("maximum_prediction needs n >= 2, got {n}")));
    }
    let w = theta * (n as f64).ln();
    Ok((1.0 + maximum_correction(n, theta)? / (2.0 * w)) / (2.0 * PI * w).sqrt())
}

/// `theta psi(theta) + theta^2 psi'(theta) + 1/12 - delta_n^2`.
pub(crate) fn maximum_correction(n: usize, theta: f64) -> Result<f64> {
    let u = u_star(n, theta)?;
    let frac = u - u.floor();
    let delta = frac.min(1.0 - frac);
    Ok(theta * digamma(theta)? + theta * theta * trigamma(theta)? + 1.0 / 12.0 - delta * delta)
}

/// Predicted scaled neighbour difference at `k = nint(u_n* + g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborDifference {
    pub k: usize,
    /// Offset actually realised, `k - u_n*`.
    pub g: f64,
    /// `-(2g + 1) / (2 theta ln n)`, the leading term of
    /// `sqrt(2 pi w) (P{K_n = k+1} - P{K_n = k})`.
    pub predicted: f64,
}

pub fn neighbor_difference(n: usize, theta: f64, g: f64) -> Result<NeighborDifference> {
    if n < 2 {
        return Err(domain(format!("neighbor_difference needs n >= 2, got {n}")));
    }
    let u = u_star(n, theta)?;
    let k = nint(u + g);
    if k < 1 || k as usize > n - 1 {
        return Err(domain(format!("k = {k} outside 1..={}", n - 1)));
    }
    let g_eff = k as f64 - u;
    let w = theta * (n as f64).ln();
    Ok(NeighborDifference {
        k: k as usize,
        g: g_eff,
        predicted: -(2.0 * g_eff + 1.0) / (2.0 * w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::RationalTheta;

    fn rational(p: u64, q: u64) -> Theta {
        Theta::Rational(RationalTheta::new(p, q).unwrap())
    }

    #[test]
    fn nint_convention() {
        assert_eq!(nint(2.4), 2);
        assert_eq!(nint(2.5), 2);
        assert_eq!(nint(2.6), 3);
        assert_eq!(nint(-0.4), 0);
        assert_eq!(nint(-0.5), -1);
        assert_eq!(nint(3.0), 3);
    }

    #[test]
    fn u_star_values() {
        let u = u_star(3, 1.0).unwrap();
        assert!((u - (3f64.ln() + EULER_GAMMA - 0.5)).abs() < 1e-15);
        assert!((u - 1.175_827).abs() < 1e-5);
        for &theta in &[0.3, 1.0, 4.0] {
            assert!(u_star(3, theta).unwrap() > u_star(2, theta).unwrap());
        }
    }

    #[test]
    fn mode_examples() {
        let m = exact_mode(3, rational(2, 3)).unwrap();
        assert_eq!((m.mode_least, m.unique), (1, false));
        let m = exact_mode(3, rational(1, 1)).unwrap();
        assert_eq!((m.mode_least, m.unique), (2, true));
        assert!((m.max_prob - 0.5).abs() < 1e-14);
        let m = exact_mode(100, rational(1, 1)).unwrap();
        assert!([4, 5].contains(&m.mode_least));
        assert_eq!(m.mode_least, 5);
    }

    #[test]
    fn float_path_agrees_with_exact() {
        for n in [5, 40, 300, 2000] {
            for &(p, q) in &[(1, 2), (1, 1), (2, 1)] {
                let theta = p as f64 / q as f64;
                let a = exact_mode(n, Theta::Float(theta)).unwrap();
                let b = exact_mode(n, rational(p, q)).unwrap();
                assert_eq!((a.mode_least, a.unique), (b.mode_least, b.unique), "n = {n}, theta = {theta}");
                assert!((a.max_prob - b.max_prob).abs() < 1e-12);
            }
        }
        // exact tie reached through the float path
        let m = exact_mode(3, Theta::Float(2.0 / 3.0)).unwrap();
        assert_eq!(m.mode_least, 1);
    }

    #[test]
    fn report_invariants() {
        for n in 1..60 {
            let r = exact_mode(n, rational(3, 2)).unwrap();
            assert!(r.mode_least >= 1 && r.mode_least <= n);
            assert!((0.0..1.0).contains(&r.frac_u_star));
            assert!((0.0..=0.5).contains(&r.delta));
            if r.unique {
                assert_eq!(r.agrees_nint, r.mode_least as i64 == r.nint_u_star);
            }
        }
    }

    #[test]
    fn hammersley_examples() {
        assert!(hammersley_window(2, HammersleyBounds::TIGHT).is_err());
        let w = hammersley_window(31, HammersleyBounds::TIGHT).unwrap();
        assert!(w.end() - w.start() + 1 <= 2);
        assert!(w.contains(&(exact_mode(31, rational(1, 1)).unwrap().mode_least as i64)));
        let loose = hammersley_window(31, HammersleyBounds::LOOSE).unwrap();
        assert!(loose.start() <= w.start() && loose.end() >= w.end());
    }

    #[test]
    fn maximum_prediction_shape() {
        let n = 5000;
        let w = (n as f64).ln();
        let p = maximum_prediction(n, 1.0).unwrap();
        assert!((p * (2.0 * PI * w).sqrt() - 1.0).abs() < 0.1);
        assert!(maximum_prediction(1, 1.0).is_err());
    }

    #[test]
    fn neighbor_difference_examples() {
        let n = 10_000;
        let w = (n as f64).ln();
        let d = neighbor_difference(n, 1.0, 0.0).unwrap();
        assert!(d.g.abs() <= 0.5);
        assert!((d.predicted + (2.0 * d.g + 1.0) / (2.0 * w)).abs() < 1e-15);
        // g = -1/2 realised exactly would give zero
        let u = u_star(n, 1.0).unwrap();
        let half = -(u - u.floor());
        let d = neighbor_difference(n, 1.0, half).unwrap();
        assert_eq!(d.k as i64, u.floor() as i64);
        assert!(neighbor_difference(2, 1.0, 50.0).is_err());
    }
}

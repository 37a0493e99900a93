//! Invariant suite behind `ewens --seed-check`.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::exact::{ewens_pmf_exact, ewens_pmf_float, rising_factorial_exact, stirling_first_row};
use crate::expansion::correction_polynomials;
use crate::mode::{density_experiment, hammersley_window, nint, HammersleyBounds};
use crate::special::{digamma, polygamma, recompute_constants, s_star, s_star_series, ZETA2, ZETA3};
use crate::theta::{RationalTheta, Theta};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn() -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("stirling rows expand the rising factorial", stirling_identity),
    ("exact pmf normalized and log-concave", exact_pmf),
    ("float pmf matches exact pmf", float_pmf),
    ("stored constants", constants),
    ("polygamma recurrence", polygamma_recurrence),
    ("H_j degree and parity", hj_shape),
    ("s* closed form vs series", s_star_check),
    ("mode at theta = 1 within log n + gamma - 1/2 bracket", theta_one_bracket),
    ("mode inside Hammersley window", hammersley),
    ("mode disagreements only at ceil(u*)", disagreement_direction),
];

/// Runs every check; a check that errors counts as failed.
pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, check)| {
            let start = Instant::now();
            let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
            CheckOutcome {
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn rational(p: u64, q: u64) -> RationalTheta {
    RationalTheta::new(p, q).expect("nonzero")
}

fn stirling_identity() -> Result<(bool, String)> {
    let xs = [
        BigRational::from_integer(1.into()),
        BigRational::from_integer(2.into()),
        BigRational::new(1.into(), 2.into()),
        BigRational::from_integer((-3).into()),
    ];
    for n in 1..=60 {
        let row = stirling_first_row(n)?;
        for x in &xs {
            if row.eval(x) != rising_factorial_exact(x, n) {
                return Ok((false, format!("mismatch at n = {n}, x = {x}")));
            }
        }
    }
    Ok((true, "n <= 60, x in {1, 2, 1/2, -3}".into()))
}

fn exact_pmf() -> Result<(bool, String)> {
    for (p, q) in [(1, 2), (2, 3), (1, 1), (3, 1)] {
        for n in 1..=40 {
            let pmf = ewens_pmf_exact(n, rational(p, q))?;
            if !pmf.sum().is_one() || !pmf.is_log_concave() {
                return Ok((false, format!("n = {n}, theta = {p}/{q}")));
            }
        }
    }
    Ok((true, "n <= 40, theta in {1/2, 2/3, 1, 3}".into()))
}

fn float_pmf() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for (p, q) in [(1, 2), (2, 3), (1, 1), (3, 1)] {
        let n = 100;
        let exact = ewens_pmf_exact(n, rational(p, q))?.to_float();
        let float = ewens_pmf_float(n, p as f64 / q as f64)?;
        for (a, b) in exact.probs().iter().zip(float.probs()) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok((worst <= 1e-12, format!("max termwise difference {worst:.3e} at n = 100")))
}

fn constants() -> Result<(bool, String)> {
    let checks = recompute_constants();
    let worst = checks.iter().map(|c| c.abs_error()).fold(0.0, f64::max);
    Ok((worst <= 1e-14, format!("max |stored - recomputed| {worst:.3e}")))
}

fn polygamma_recurrence() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for m in 0..=6u32 {
        let fact: f64 = (1..=m).map(f64::from).product();
        for &x in &[0.3, 1.0, 2.5, 7.0] {
            let lhs = polygamma(m, x + 1.0)? - polygamma(m, x)?;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = sign * fact / x.powi(m as i32 + 1);
            worst = worst.max((lhs - rhs).abs() / rhs.abs());
        }
    }
    Ok((worst <= 1e-12, format!("max relative residual {worst:.3e}, m <= 6")))
}

fn hj_shape() -> Result<(bool, String)> {
    for &theta in &[0.5, 1.0, 2.0] {
        let polys = correction_polynomials(theta, 8)?;
        for (j, h) in polys.iter().enumerate() {
            let parity_ok = h
                .coeffs()
                .iter()
                .enumerate()
                .all(|(i, c)| (i + j) % 2 == 0 || c.is_zero());
            if h.degree() != Some(3 * j) || !parity_ok {
                return Ok((false, format!("H_{j} at theta = {theta}")));
            }
        }
    }
    Ok((true, "j <= 8, theta in {0.5, 1, 2}".into()))
}

fn s_star_check() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for &theta in &[0.1, 0.5, 1.0, 2.0, 5.0] {
        let s = s_star(theta)?;
        if s <= 0.0 {
            return Ok((false, format!("s*({theta}) = {s}")));
        }
        worst = worst.max((s - s_star_series(theta, 100_000)?).abs());
    }
    let at_one = (s_star(1.0)? - (ZETA2 - ZETA3)).abs();
    Ok((
        worst <= 1e-10 && at_one <= 1e-12,
        format!("closed vs series {worst:.3e}, |s*(1) - (zeta2 - zeta3)| {at_one:.3e}"),
    ))
}

fn theta_one_bracket() -> Result<(bool, String)> {
    let n_max = 2000;
    let rep = density_experiment(n_max, Theta::Rational(rational(1, 1)))?;
    for r in &rep.records {
        let c = (r.n as f64).ln() + crate::special::EULER_GAMMA - 0.5;
        let m = r.mode_least as f64;
        if (m != c.floor() && m != c.ceil()) || !r.unique {
            return Ok((false, format!("n = {}", r.n)));
        }
    }
    Ok((true, format!("3 <= n <= {n_max}, unique")))
}

fn hammersley() -> Result<(bool, String)> {
    let rep = density_experiment(2000, Theta::Rational(rational(1, 1)))?;
    for r in &rep.records {
        if !hammersley_window(r.n, HammersleyBounds::TIGHT)?.contains(&(r.mode_least as i64)) {
            return Ok((false, format!("n = {}", r.n)));
        }
    }
    Ok((true, "3 <= n <= 2000".into()))
}

fn disagreement_direction() -> Result<(bool, String)> {
    let rep = density_experiment(1000, Theta::Rational(rational(1, 1)))?;
    let ok = rep.disagreements_at_ceil()
        && rep
            .disagreements()
            .iter()
            .all(|r| r.frac_u_star < 0.5 && nint(r.u_star) == r.floor_u_star());
    let psi = digamma(1.0)?;
    Ok((
        ok,
        format!(
            "{} disagreements for n <= 1000 (psi(1) = {psi:.6})",
            rep.disagreements().len()
        ),
    ))
}

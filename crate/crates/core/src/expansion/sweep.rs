//! Error sweeps of the expansions against exact references.

use std::io::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{cdf_with, large_deviation_density, EdgeworthExpansion};
use crate::csv::fmt_f64;
use crate::error::{domain, Result};
use crate::exact::{ewens_pmf_float, rational_to_f64, stirling_first_row_capped};
use crate::special::digamma;

/// Sup-norm error of the `r`-term local expansion at one `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeworthErrorRow {
    pub theta: f64,
    pub n: usize,
    pub r: usize,
    pub sup_error: f64,
    /// `(ln n)^{(r+1)/2} * sup_error`, which tends to zero.
    pub scaled_error: f64,
}

/// `sup_{1<=k<=n} |P{K_n = k} - expansion_r(k)|` for `r = 0..=r_max` at every `n`.
///
/// The reference PMF comes from the Bernoulli convolution.
pub fn edgeworth_error_sweep(ns: &[usize], theta: f64, r_max: usize) -> Result<Vec<EdgeworthErrorRow>> {
    let expansion = EdgeworthExpansion::new(theta, r_max)?;
    let per_n = ns
        .par_iter()
        .map(|&n| -> Result<Vec<EdgeworthErrorRow>> {
            let pmf = ewens_pmf_float(n, theta)?;
            let mut sup = vec![0.0f64; r_max + 1];
            for (i, &p) in pmf.probs().iter().enumerate() {
                let point = expansion.point(n, (i + 1) as i64)?;
                for (r, approx) in expansion.partial_sums(&point).into_iter().enumerate() {
                    sup[r] = sup[r].max((p - approx).abs());
                }
            }
            let ln_n = (n as f64).ln();
            Ok(sup
                .into_iter()
                .enumerate()
                .map(|(r, s)| EdgeworthErrorRow {
                    theta,
                    n,
                    r,
                    sup_error: s,
                    scaled_error: ln_n.powf((r as f64 + 1.0) / 2.0) * s,
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

pub fn write_edgeworth_csv<W: Write>(mut out: W, rows: &[EdgeworthErrorRow]) -> io::Result<()> {
    writeln!(out, "theta,n,r,sup_error,scaled_error")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(row.theta),
            row.n,
            row.r,
            fmt_f64(row.sup_error),
            fmt_f64(row.scaled_error)
        )?;
    }
    Ok(())
}

/// Lattice sup-errors of the normal and the corrected normal approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfErrorRow {
    pub theta: f64,
    pub n: usize,
    pub sup_error_normal: f64,
    pub sup_error_corrected: f64,
}

impl CdfErrorRow {
    /// `ln n * sup_error_corrected`, which stays bounded.
    pub fn scaled_corrected(&self) -> f64 {
        (self.n as f64).ln() * self.sup_error_corrected
    }
}

pub fn cdf_error_sweep(ns: &[usize], theta: f64) -> Result<Vec<CdfErrorRow>> {
    let theta_psi = theta * digamma(theta)?;
    ns.par_iter()
        .map(|&n| {
            if n < 2 {
                return Err(domain(format!("cdf sweep needs n >= 2, got {n}")));
            }
            let pmf = ewens_pmf_float(n, theta)?;
            let w = theta * (n as f64).ln();
            let (mut normal, mut corrected) = (0.0f64, 0.0f64);
            for (i, exact) in pmf.cdf().into_iter().enumerate() {
                let x = ((i + 1) as f64 - w) / w.sqrt();
                normal = normal.max((exact - super::normal_cdf(x)).abs());
                corrected = corrected.max((exact - cdf_with(w, theta_psi, x)).abs());
            }
            Ok(CdfErrorRow {
                theta,
                n,
                sup_error_normal: normal,
                sup_error_corrected: corrected,
            })
        })
        .collect()
}

pub fn write_cdf_csv<W: Write>(mut out: W, rows: &[CdfErrorRow]) -> io::Result<()> {
    writeln!(out, "theta,n,sup_error_normal,sup_error_corrected,scaled_corrected")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(row.theta),
            row.n,
            fmt_f64(row.sup_error_normal),
            fmt_f64(row.sup_error_corrected),
            fmt_f64(row.scaled_corrected())
        )?;
    }
    Ok(())
}

/// Large-deviation approximation of `[n k]/n!` against the exact value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LargeDeviationRow {
    pub n: usize,
    pub k: usize,
    /// `k / ln n`
    pub theta: f64,
    pub q: usize,
    pub approx: f64,
    pub exact: f64,
    pub rel_error: f64,
}

/// Evaluates orders `q = 0..=q_max` at each `k`; the exact values come from
/// the big-integer Stirling row, so `n` is limited by `row_cap`.
pub fn large_deviation_sweep(
    n: usize,
    ks: &[usize],
    q_max: usize,
    eta: f64,
    row_cap: usize,
) -> Result<Vec<LargeDeviationRow>> {
    let row = stirling_first_row_capped(n, row_cap)?;
    let n_fact = BigInt::from((1..=n as u64).product::<num_bigint::BigUint>());
    let mut rows = Vec::new();
    for &k in ks {
        let stirling = row
            .get(k)
            .ok_or_else(|| domain(format!("k = {k} outside 1..={n}")))?;
        let exact = rational_to_f64(&BigRational::new(BigInt::from(stirling.clone()), n_fact.clone()));
        for q in 0..=q_max {
            let approx = large_deviation_density(n, k, q, eta)?;
            rows.push(LargeDeviationRow {
                n,
                k,
                theta: k as f64 / (n as f64).ln(),
                q,
                approx,
                exact,
                rel_error: (approx - exact).abs() / exact,
            });
        }
    }
    Ok(rows)
}

pub fn write_large_deviation_csv<W: Write>(mut out: W, rows: &[LargeDeviationRow]) -> io::Result<()> {
    writeln!(out, "n,k,theta,q,approx,exact,rel_error")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.n,
            row.k,
            fmt_f64(row.theta),
            row.q,
            fmt_f64(row.approx),
            fmt_f64(row.exact),
            fmt_f64(row.rel_error)
        )?;
    }
    Ok(())
}

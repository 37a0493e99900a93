//! Desk-scale experiments on the mode and the maximum.

use std::f64::consts::PI;
use std::io::{self, Write};

use rayon::prelude::*;

use super::{exact_mode, maximum_prediction, neighbor_difference, ModeReport, ModeScanner};
use crate::csv::{fmt_bool, fmt_f64};
use crate::error::{domain, Result};
use crate::exact::ewens_pmf_float;
use crate::theta::Theta;

/// Exact modes for every `n` in `ns`.
pub fn mode_sweep(ns: &[usize], theta: Theta) -> Result<Vec<ModeReport>> {
    ns.par_iter().map(|&n| exact_mode(n, theta)).collect()
}

/// Exact modes for `lo <= n <= hi`.
///
/// Rational `theta` walks one Stirling prefix through all rows, which is
/// inherently sequential; float `theta` decides each `n` independently in
/// parallel. Output is ordered by `n` either way.
fn mode_range(lo: usize, hi: usize, theta: Theta) -> Result<Vec<ModeReport>> {
    match theta {
        Theta::Rational(r) => {
            let mut scanner = ModeScanner::new(r, hi);
            let mut out = Vec::with_capacity(hi + 1 - lo);
            for n in 1..=hi {
                scanner.advance_to(n);
                if n >= lo {
                    let m = scanner.mode()?;
                    out.push(ModeReport::new(n, theta, m.mode_least, m.unique, m.max_prob)?);
                }
            }
            Ok(out)
        }
        Theta::Float(_) => (lo..=hi).into_par_iter().map(|n| exact_mode(n, theta)).collect(),
    }
}

/// Outcome of comparing the exact mode with `nint(u_n*)` for `3 <= n <= N`.
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub theta: Theta,
    pub n_max: usize,
    pub records: Vec<ModeReport>,
}

impl DensityReport {
    /// Fraction of `n` with `u_n = nint(u_n*)`.
    pub fn fraction(&self) -> f64 {
        let agree = self.records.iter().filter(|r| r.agrees_nint).count();
        agree as f64 / self.records.len() as f64
    }

    /// `#{agreements among the first m records} / m` for every prefix.
    pub fn running_fraction(&self) -> Vec<(usize, f64)> {
        let mut agree = 0usize;
        self.records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                agree += r.agrees_nint as usize;
                (r.n, agree as f64 / (i + 1) as f64)
            })
            .collect()
    }

    pub fn disagreements(&self) -> Vec<&ModeReport> {
        self.records.iter().filter(|r| !r.agrees_nint).collect()
    }

    /// Smallest `C` with `|{u_n*} - 1/2| <= C / ln n` on every disagreement
    /// (zero when there are none).
    pub fn fitted_c(&self) -> f64 {
        self.disagreements()
            .iter()
            .map(|r| (r.frac_u_star - 0.5).abs() * (r.n as f64).ln())
            .fold(0.0, f64::max)
    }

    /// Whether every disagreement has the mode at `ceil(u_n*)`.
    pub fn disagreements_at_ceil(&self) -> bool {
        self.disagreements()
            .iter()
            .all(|r| r.mode_least as i64 == r.ceil_u_star())
    }

    /// Longest run of consecutive `n` whose mode is `ceil(u_n*)`
    /// (`ceil = true`) or `floor(u_n*)` (`ceil = false`).
    pub fn longest_run(&self, ceil: bool) -> usize {
        let mut best = 0;
        let mut cur = 0;
        for r in &self.records {
            let target = if ceil { r.ceil_u_star() } else { r.floor_u_star() };
            let hit = r.mode_least as i64 == target && r.ceil_u_star() != r.floor_u_star();
            cur = if hit { cur + 1 } else { 0 };
            best = best.max(cur);
        }
        best
    }
}

pub fn density_experiment(n_max: usize, theta: Theta) -> Result<DensityReport> {
    if n_max < 3 {
        return Err(domain(format!("density experiment needs N >= 3, got {n_max}")));
    }
    Ok(DensityReport {
        theta,
        n_max,
        records: mode_range(3, n_max, theta)?,
    })
}

/// `{u_n*}` lies in `(1/2 - 3/ln n, 1/2)`, where a positive `s*` pushes the
/// mode up to `ceil(u_n*)` while `nint` rounds down.
pub fn in_prefilter_band(n: usize, frac: f64) -> bool {
    let width = 3.0 / (n as f64).ln();
    frac > 0.5 - width && frac < 0.5
}

#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub theta: Theta,
    pub n_max: usize,
    /// Every candidate that passed the prefilter, with its exact mode.
    pub checked: Vec<ModeReport>,
}

impl CounterexampleReport {
    /// `n` with `u_n != nint(u_n*)`, possibly none.
    pub fn confirmed(&self) -> Vec<&ModeReport> {
        self.checked.iter().filter(|r| !r.agrees_nint).collect()
    }
}

/// Searches `3 <= n <= N` for `u_n(theta) != nint(u_n*(theta))`.
///
/// Candidates come from [`in_prefilter_band`]; each is confirmed with the
/// exact big-integer mode. A float `theta` is confirmed at the exact binary
/// value of the double.
pub fn counterexample_search(n_max: usize, theta: Theta) -> Result<CounterexampleReport> {
    if n_max < 3 {
        return Err(domain(format!("counterexample search needs N >= 3, got {n_max}")));
    }
    let t = theta.to_f64();
    let mut candidates = Vec::new();
    for n in 3..=n_max {
        let u = super::u_star(n, t)?;
        if in_prefilter_band(n, u - u.floor()) {
            candidates.push(n);
        }
    }
    let mut checked = Vec::with_capacity(candidates.len());
    if let Some(&last) = candidates.last() {
        let mut scanner = ModeScanner::new(theta.to_rational()?, last);
        for n in candidates {
            scanner.advance_to(n);
            let m = scanner.mode()?;
            checked.push(ModeReport::new(n, theta, m.mode_least, m.unique, m.max_prob)?);
        }
    }
    Ok(CounterexampleReport { theta, n_max, checked })
}

/// Smallest `n0` such that the exact mode lies in `{floor(u_n*), ceil(u_n*)}`
/// for every `n0 <= n <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketThreshold {
    pub theta: Theta,
    pub n_max: usize,
    pub holds_from: Option<usize>,
    /// `n` at which the bracket fails.
    pub violations: Vec<usize>,
}

pub fn bracket_threshold(n_max: usize, theta: Theta) -> Result<BracketThreshold> {
    if n_max < 1 {
        return Err(domain("bracket threshold needs N >= 1"));
    }
    let records = mode_range(1, n_max, theta)?;
    let violations: Vec<usize> = records
        .iter()
        .filter(|r| {
            let m = r.mode_least as i64;
            m != r.floor_u_star() && m != r.ceil_u_star()
        })
        .map(|r| r.n)
        .collect();
    let holds_from = match violations.last() {
        None => Some(1),
        Some(&v) if v < n_max => Some(v + 1),
        Some(_) => None,
    };
    Ok(BracketThreshold {
        theta,
        n_max,
        holds_from,
        violations,
    })
}

/// Trace with header `n,mode,unique,u_star,frac,nint,agrees`.
pub fn write_mode_csv<W: Write>(mut out: W, records: &[ModeReport]) -> io::Result<()> {
    writeln!(out, "n,mode,unique,u_star,frac,nint,agrees")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            r.mode_least,
            fmt_bool(r.unique),
            fmt_f64(r.u_star),
            fmt_f64(r.frac_u_star),
            r.nint_u_star,
            fmt_bool(r.agrees_nint)
        )?;
    }
    Ok(())
}

/// Exact versus predicted maximum at one `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximumRow {
    pub theta: f64,
    pub n: usize,
    pub mode: usize,
    pub exact: f64,
    pub predicted: f64,
    /// `|sqrt(2 pi w) (M_n - predicted)| ln n`.
    pub scaled_residual: f64,
}

/// Maximum of the float PMF against [`maximum_prediction`].
pub fn maximum_sweep(ns: &[usize], theta: f64) -> Result<Vec<MaximumRow>> {
    ns.par_iter()
        .map(|&n| {
            let pmf = ewens_pmf_float(n, theta)?;
            let (mode, exact) = pmf.argmax();
            let predicted = maximum_prediction(n, theta)?;
            let ln_n = (n as f64).ln();
            let scale = (2.0 * PI * theta * ln_n).sqrt();
            Ok(MaximumRow {
                theta,
                n,
                mode,
                exact,
                predicted,
                scaled_residual: (scale * (exact - predicted)).abs() * ln_n,
            })
        })
        .collect()
}

pub fn write_maximum_csv<W: Write>(mut out: W, rows: &[MaximumRow]) -> io::Result<()> {
    writeln!(out, "theta,n,mode,exact,predicted,scaled_residual")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(r.theta),
            r.n,
            r.mode,
            fmt_f64(r.exact),
            fmt_f64(r.predicted),
            fmt_f64(r.scaled_residual)
        )?;
    }
    Ok(())
}

/// Exact versus predicted scaled neighbour difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborRow {
    pub theta: f64,
    pub n: usize,
    /// Requested offset from `u_n*`.
    pub g: f64,
    pub k: usize,
    /// Realised offset `k - u_n*`.
    pub g_eff: f64,
    /// `sqrt(2 pi w) (P{K_n = k+1} - P{K_n = k})`.
    pub exact: f64,
    pub predicted: f64,
    /// `(exact - predicted) ln^2 n`.
    pub scaled_residual: f64,
}

pub fn neighbor_difference_sweep(ns: &[usize], theta: f64, gs: &[f64]) -> Result<Vec<NeighborRow>> {
    let per_n = ns
        .par_iter()
        .map(|&n| -> Result<Vec<NeighborRow>> {
            let pmf = ewens_pmf_float(n, theta)?;
            let ln_n = (n as f64).ln();
            let scale = (2.0 * PI * theta * ln_n).sqrt();
            gs.iter()
                .map(|&g| {
                    let d = neighbor_difference(n, theta, g)?;
                    let exact = scale * (pmf.probs()[d.k] - pmf.probs()[d.k - 1]);
                    Ok(NeighborRow {
                        theta,
                        n,
                        g,
                        k: d.k,
                        g_eff: d.g,
                        exact,
                        predicted: d.predicted,
                        scaled_residual: (exact - d.predicted) * ln_n * ln_n,
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

pub fn write_neighbor_csv<W: Write>(mut out: W, rows: &[NeighborRow]) -> io::Result<()> {
    writeln!(out, "theta,n,g,k,g_eff,exact,predicted,scaled_residual")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(r.theta),
            r.n,
            fmt_f64(r.g),
            r.k,
            fmt_f64(r.g_eff),
            fmt_f64(r.exact),
            fmt_f64(r.predicted),
            fmt_f64(r.scaled_residual)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::RationalTheta;

    fn one() -> Theta {
        Theta::Rational(RationalTheta::integer(1).unwrap())
    }

    #[test]
    fn density_small() {
        let rep = density_experiment(300, one()).unwrap();
        assert_eq!(rep.records.len(), 298);
        assert_eq!(rep.records[0].n, 3);
        let f = rep.fraction();
        assert!(f > 0.5 && f <= 1.0);
        let (_, last) = *rep.running_fraction().last().unwrap();
        assert_eq!(last, f);
        for r in rep.disagreements() {
            assert!((r.frac_u_star - 0.5).abs() * (r.n as f64).ln() <= rep.fitted_c());
        }
        assert!(density_experiment(2, one()).is_err());
    }

    #[test]
    fn float_and_rational_density_match() {
        let a = density_experiment(150, one()).unwrap();
        let b = density_experiment(150, Theta::Float(1.0)).unwrap();
        let key = |r: &ModeReport| (r.n, r.mode_least, r.unique);
        assert_eq!(
            a.records.iter().map(key).collect::<Vec<_>>(),
            b.records.iter().map(key).collect::<Vec<_>>()
        );
    }

    #[test]
    fn counterexamples_match_density() {
        let n_max = 600;
        let dens = density_experiment(n_max, one()).unwrap();
        let search = counterexample_search(n_max, one()).unwrap();
        let from_density: Vec<usize> = dens.disagreements().iter().map(|r| r.n).collect();
        let confirmed: Vec<usize> = search.confirmed().iter().map(|r| r.n).collect();
        assert_eq!(from_density, confirmed);
    }

    #[test]
    fn bracket_small() {
        let b = bracket_threshold(200, one()).unwrap();
        assert!(b.holds_from.is_some());
        assert!(b.holds_from.unwrap() <= 200);
    }

    #[test]
    fn csv_trace() {
        let rep = density_experiment(4, one()).unwrap();
        let mut buf = Vec::new();
        write_mode_csv(&mut buf, &rep.records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,mode,unique,u_star,frac,nint,agrees");
        assert!(lines[1].starts_with("3,2,1,"));
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn neighbor_rows() {
        let rows = neighbor_difference_sweep(&[1000], 1.0, &[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert!((r.exact - r.predicted).abs() < 0.1);
        }
    }
}

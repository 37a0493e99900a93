use num_bigint::BigUint;
use num_traits::Pow;

use ewens::exact::{ewens_pmf_exact, ewens_pmf_float, StirlingPrefix};
use ewens::mode::{
    bracket_threshold, counterexample_search, density_experiment, exact_mode, hammersley_window, in_prefilter_band,
    mode_sweep, u_star, HammersleyBounds, ModeScanner,
};
use ewens::special::EULER_GAMMA;
use ewens::{RationalTheta, Theta};

fn rational(p: u64, q: u64) -> Theta {
    Theta::Rational(RationalTheta::new(p, q).unwrap())
}

/// Weights `p^k q^(n-k) [n k]`, proportional to the PMF at theta = p/q.
fn weights(row: &[BigUint], p: u64, q: u64) -> Vec<BigUint> {
    let n = row.len();
    (1..=n)
        .map(|k| &row[k - 1] * BigUint::from(p).pow(k as u32) * BigUint::from(q).pow((n - k) as u32))
        .collect()
}

#[test]
fn unimodal_shape_exact() {
    for (p, q) in [(1u64, 2u64), (2, 3), (1, 1), (2, 1)] {
        let theta = RationalTheta::new(p, q).unwrap();
        let mut prefix = StirlingPrefix::new(500);
        let mut scanner = ModeScanner::new(theta, 500);
        for n in 1..=500 {
            while prefix.n() < n {
                prefix.advance();
            }
            scanner.advance_to(n);
            assert_eq!(prefix.values().len(), n);
            let w = weights(prefix.values(), p, q);
            let m = scanner.mode().unwrap();
            let u = m.mode_least;
            // strictly up to u, then flat at most one step, then strictly down
            assert!(w[..u].windows(2).all(|s| s[0] < s[1]), "n = {n}, theta = {p}/{q}");
            let after = if m.unique { u } else { u + 1 };
            assert!(w[after - 1..].windows(2).all(|s| s[0] > s[1]), "n = {n}, theta = {p}/{q}");
            if !m.unique {
                assert_eq!(w[u - 1], w[u]);
            }
        }
    }
}

#[test]
fn mode_of_weights_equals_mode_of_pmf() {
    for (p, q) in [(1u64, 2u64), (3, 1), (5, 7)] {
        for n in [1, 2, 7, 40, 90] {
            let pmf = ewens_pmf_exact(n, RationalTheta::new(p, q).unwrap()).unwrap();
            let probs = pmf.probs();
            let max = probs.iter().max().unwrap();
            let least = probs.iter().position(|x| x == max).unwrap() + 1;
            let report = exact_mode(n, rational(p, q)).unwrap();
            assert_eq!(report.mode_least, least);
            assert_eq!(report.unique, probs.iter().filter(|x| *x == max).count() == 1);
        }
    }
}

#[test]
fn mode_matches_float_argmax_at_theta_one() {
    // the float PMF is an independent route to the same modes when no tie is near
    let dens = density_experiment(2000, rational(1, 1)).unwrap();
    for r in dens.records.iter().step_by(37) {
        let pmf = ewens_pmf_float(r.n, 1.0).unwrap();
        assert_eq!(pmf.argmax().0, r.mode_least, "n = {}", r.n);
    }
}

#[test]
fn theta_one_bracket_and_uniqueness_up_to_ten_thousand() {
    let theta = rational(1, 1);
    let mut scanner = ModeScanner::new(RationalTheta::integer(1).unwrap(), 10_000);
    for n in 1..=10_000 {
        scanner.advance_to(n);
        let m = scanner.mode().unwrap();
        let c = (n as f64).ln() + EULER_GAMMA - 0.5;
        let k = m.mode_least as f64;
        assert!(k == c.floor() || k == c.ceil(), "n = {n}: mode {k}, centre {c}");
        if n >= 3 {
            assert!(m.unique, "n = {n}");
            let mode = m.mode_least as i64;
            assert!(hammersley_window(n, HammersleyBounds::TIGHT).unwrap().contains(&mode), "n = {n}");
            assert!(hammersley_window(n, HammersleyBounds::LOOSE).unwrap().contains(&mode), "n = {n}");
        }
    }
    assert_eq!(exact_mode(10_000, theta).unwrap().mode_least, 9);
}

#[test]
fn hammersley_width() {
    for n in 10..=100_000 {
        let w = hammersley_window(n, HammersleyBounds::TIGHT).unwrap();
        assert!(w.end() - w.start() + 1 <= 2, "n = {n}");
        assert!(!w.is_empty());
    }
}

#[test]
fn floor_ceil_bracket() {
    for theta in [rational(1, 2), rational(1, 1), rational(2, 1)] {
        let b = bracket_threshold(10_000, theta).unwrap();
        let from = b.holds_from.expect("bracket holds at the end of the range");
        assert!(from <= 100, "theta = {theta}: holds only from {from}");
    }
}

#[test]
fn sweep_matches_scanner() {
    let ns = [3, 150, 201, 999, 5000];
    let reports = mode_sweep(&ns, rational(3, 2)).unwrap();
    let mut scanner = ModeScanner::new(RationalTheta::new(3, 2).unwrap(), 5000);
    for (r, &n) in reports.iter().zip(&ns) {
        scanner.advance_to(n);
        assert_eq!(r.mode_least, scanner.mode().unwrap().mode_least);
    }
}

#[test]
fn disagreements_lie_in_prefilter_band() {
    let dens = density_experiment(2000, rational(1, 1)).unwrap();
    for r in dens.disagreements() {
        assert!(in_prefilter_band(r.n, r.frac_u_star), "n = {}", r.n);
    }
    // outside the band every n agrees
    for r in &dens.records {
        if !in_prefilter_band(r.n, r.frac_u_star) {
            assert!(r.agrees_nint, "n = {}", r.n);
        }
    }
    let search = counterexample_search(2000, rational(1, 1)).unwrap();
    let a: Vec<usize> = dens.disagreements().iter().map(|r| r.n).collect();
    let b: Vec<usize> = search.confirmed().iter().map(|r| r.n).collect();
    assert_eq!(a, b);
    for r in search.confirmed() {
        assert!(r.frac_u_star < 0.5);
        assert_eq!(r.mode_least as i64, r.ceil_u_star());
    }
}

#[test]
fn runs_of_both_kinds() {
    let dens = density_experiment(2000, rational(1, 1)).unwrap();
    assert!(dens.longest_run(true) >= 5);
    assert!(dens.longest_run(false) >= 5);
}

#[test]
fn float_theta_counterexamples_use_exact_value() {
    // 0.5 is a dyadic rational, so both routes decide the same modes
    let a = counterexample_search(800, Theta::Float(0.5)).unwrap();
    let b = counterexample_search(800, rational(1, 2)).unwrap();
    let na: Vec<usize> = a.confirmed().iter().map(|r| r.n).collect();
    let nb: Vec<usize> = b.confirmed().iter().map(|r| r.n).collect();
    assert_eq!(na, nb);
}

#[test]
fn u_star_monotone() {
    for theta in [0.1, 1.0, 7.5] {
        let mut prev = u_star(2, theta).unwrap();
        for n in 3..200 {
            let u = u_star(n, theta).unwrap();
            assert!(u > prev);
            prev = u;
        }
    }
}

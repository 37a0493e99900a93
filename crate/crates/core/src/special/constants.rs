/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;
/// `zeta(2) = pi^2 / 6`.
pub const ZETA2: f64 = 1.644_934_066_848_226_4;
/// Apéry's constant `zeta(3)`.
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

pub fn zeta2() -> f64 {
    ZETA2
}

pub fn zeta3() -> f64 {
    ZETA3
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantCheck {
    pub name: &'static str,
    pub stored: f64,
    pub recomputed: f64,
}

impl ConstantCheck {
    pub fn abs_error(&self) -> f64 {
        (self.stored - self.recomputed).abs()
    }
}

/// Recomputes the stored constants from truncated sums with Euler–Maclaurin tails.
pub fn recompute_constants() -> [ConstantCheck; 3] {
    const N: usize = 200;
    [
        ConstantCheck {
            name: "euler_gamma",
            stored: EULER_GAMMA,
            recomputed: gamma_by_harmonic_sum(N),
        },
        ConstantCheck {
            name: "zeta2",
            stored: ZETA2,
            recomputed: zeta_by_sum(2.0, N),
        },
        ConstantCheck {
            name: "zeta3",
            stored: ZETA3,
            recomputed: zeta_by_sum(3.0, N),
        },
    ]
}

fn gamma_by_harmonic_sum(n: usize) -> f64 {
    let h: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
    let nf = n as f64;
    let n2 = nf * nf;
    h - nf.ln() - 1.0 / (2.0 * nf) + 1.0 / (12.0 * n2) - 1.0 / (120.0 * n2 * n2)
        + 1.0 / (252.0 * n2 * n2 * n2)
}

/// `sum_{k<n} k^-s` plus the Euler–Maclaurin tail starting at `n`.
fn zeta_by_sum(s: f64, n: usize) -> f64 {
    let head: f64 = (1..n).rev().map(|k| (k as f64).powf(-s)).sum();
    let nf = n as f64;
    let tail = nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s * nf.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * nf.powf(-s - 3.0) / 720.0;
    head + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stored_constants_agree_with_recomputation() {
        for c in recompute_constants() {
            assert!(c.abs_error() < 1e-14, "{}: {} vs {}", c.name, c.stored, c.recomputed);
        }
        assert!((zeta2() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
    }

    #[test]
    fn zeta3_direct_summation() {
        // one million terms plus the integral tail 1/(2 N^2)
        let n = 1_000_000usize;
        let head: f64 = (1..=n).rev().map(|k| (k as f64).powi(-3)).sum();
        let nf = n as f64 + 0.5;
        let total = head + 1.0 / (2.0 * nf * nf);
        assert!((total - zeta3()).abs() < 1e-12);
    }
}

//! Stirling numbers of the first and second kind as big integers.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

/// Largest `n` for which [`stirling_first_row`] builds a full row.
///
/// A full row holds `n` integers of up to `log2(n!)` bits each.
pub const DEFAULT_ROW_CAP: usize = 5000;

/// Unsigned Stirling numbers of the first kind `[n k]` for `k = 1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingRow {
    n: usize,
    values: Vec<BigUint>,
}

impl StirlingRow {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `[n k]`, or `None` outside `1..=n`.
    pub fn get(&self, k: usize) -> Option<&BigUint> {
        if k == 0 {
            None
        } else {
            self.values.get(k - 1)
        }
    }

    /// Values in order `k = 1, 2, ..., n`.
    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn into_values(self) -> Vec<BigUint> {
        self.values
    }

    /// `sum_k [n k] x^k`, which equals the rising factorial of `x`.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        // Horner from the top coefficient; the constant term is zero.
        let mut acc = BigRational::zero();
        for v in self.values.iter().rev() {
            acc = (acc + BigRational::from_integer(v.clone().into())) * x;
        }
        acc
    }

    pub fn sum(&self) -> BigUint {
        self.values.iter().sum()
    }
}

pub fn stirling_first_row(n: usize) -> Result<StirlingRow> {
    stirling_first_row_capped(n, DEFAULT_ROW_CAP)
}

/// Row `n` by the recurrence `[m+1 k] = [m k-1] + m [m k]`, keeping one row.
pub fn stirling_first_row_capped(n: usize, cap: usize) -> Result<StirlingRow> {
    if n == 0 {
        return Err(invalid("stirling_first_row requires n >= 1"));
    }
    if n > cap {
        return Err(Error::RowCapExceeded { n, cap });
    }
    let mut prefix = StirlingPrefix::new(n);
    while prefix.n() < n {
        prefix.advance();
    }
    Ok(StirlingRow {
        n,
        values: prefix.values,
    })
}

/// The leading entries `[n 1], ..., [n K]` of successive rows.
///
/// Entries with small `k` depend only on entries with small `k` of the
/// previous row, so a truncated row advances exactly. This is what makes
/// exact mode sweeps up to `n = 10^4` cheap: the mode sits near
/// `theta log n`, far below `n`.
#[derive(Debug, Clone)]
pub struct StirlingPrefix {
    n: usize,
    limit: usize,
    values: Vec<BigUint>,
    scratch: Vec<BigUint>,
    parallel: bool,
}

impl StirlingPrefix {
    /// Starts at row `n = 1` and keeps at most `limit` leading entries.
    pub fn new(limit: usize) -> Self {
        let limit = limit.max(1);
        Self {
            n: 1,
            limit,
            values: vec![BigUint::one()],
            scratch: Vec::new(),
            parallel: false,
        }
    }

    /// Update entries on the rayon pool. Results are identical either way.
    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// `[n k]` if `k` is tracked. Entries for `k > n` are zero and not stored.
    pub fn get(&self, k: usize) -> Option<&BigUint> {
        if k == 0 {
            None
        } else {
            self.values.get(k - 1)
        }
    }

    /// Tracked entries, `k = 1..=min(n, limit)`.
    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// Whether every `k <= n` is tracked.
    pub fn is_full_row(&self) -> bool {
        self.values.len() == self.n
    }

    /// Drops entries beyond `limit`.
    pub fn truncate(&mut self, limit: usize) {
        self.limit = limit.max(1);
        self.values.truncate(self.limit);
    }

    /// Moves from row `n` to row `n + 1`.
    pub fn advance(&mut self) {
        let m = self.n as u64;
        if self.values.len() < self.limit {
            self.values.push(BigUint::zero());
        }
        if self.parallel && self.values.len() >= 8 {
            let old = &self.values;
            self.scratch.resize(old.len(), BigUint::zero());
            self.scratch
                .par_iter_mut()
                .enumerate()
                .for_each(|(i, slot)| {
                    slot.clone_from(&old[i]);
                    *slot *= m;
                    if i > 0 {
                        *slot += &old[i - 1];
                    }
                });
            std::mem::swap(&mut self.values, &mut self.scratch);
        } else {
            for i in (1..self.values.len()).rev() {
                let (lo, hi) = self.values.split_at_mut(i);
                hi[0] *= m;
                hi[0] += &lo[i - 1];
            }
            self.values[0] *= m;
        }
        self.n += 1;
    }
}

/// Stirling number of the second kind `{n k}`; zero when `k > n`.
pub fn stirling_second(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    stirling_second_table(n).swap_remove(n).swap_remove(k)
}

/// Rows `{m k}` for `m = 0..=n_max`, each of length `m + 1`.
///
/// Uses `{m+1 k} = {m k-1} + k {m k}` with `{0 0} = 1`.
pub fn stirling_second_table(n_max: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
    rows.push(vec![BigUint::one()]);
    for m in 0..n_max {
        let prev = &rows[m];
        let mut next = vec![BigUint::zero(); m + 2];
        for k in 1..=m + 1 {
            let mut v = if k <= m { &prev[k] * k } else { BigUint::zero() };
            v += &prev[k - 1];
            next[k] = v;
        }
        rows.push(next);
    }
    rows
}

//! Exact and asymptotic analysis of the Ewens (Karamata–Stirling) distribution.
//!
//! `P{K_n = k} = theta^k [n k] / theta^(n)` for `k = 1..=n`, where `[n k]` are
//! the unsigned Stirling numbers of the first kind and `theta^(n)` is the
//! rising factorial.
//!
//! * [`exact`]: Stirling numbers, rising factorials, exact and float PMFs.
//! * [`special`]: log-gamma, polygamma and related constants.
//! * [`expansion`]: Hermite and Bell machinery, the correction polynomials
//!   `H_j` and the local, distributional and large-deviation expansions.
//! * [`mode`]: exact modes, maximum asymptotics and mode-formula experiments.

pub mod csv;
pub mod error;
pub mod exact;
pub mod expansion;
pub mod mode;
pub mod selfcheck;
pub mod special;
pub mod theta;

pub use error::{Error, Result};
pub use theta::{RationalTheta, Theta};

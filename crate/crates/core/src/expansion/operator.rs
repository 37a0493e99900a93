use std::ops::{Add, Mul};

use num_traits::{One, Zero};

use super::poly::{Polynomial, Ring};

/// Constant-coefficient differential operator `sum_l c_l D^l`, `D = d/dx`.
///
/// These operators commute, so the algebra is the polynomial ring in `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPolynomial(Polynomial<f64>);

impl OperatorPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self(Polynomial::new(coeffs))
    }

    /// `c D^l`.
    pub fn d_power(c: f64, l: usize) -> Self {
        Self(Polynomial::monomial(c, l))
    }

    /// Coefficients indexed by the power of `D`.
    pub fn coeffs(&self) -> &[f64] {
        self.0.coeffs()
    }

    pub fn order(&self) -> Option<usize> {
        self.0.degree()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.scale(&c))
    }

    /// `e^{x^2/2} L e^{-x^2/2}` as a polynomial in `x`, using
    /// `e^{x^2/2} D^l e^{-x^2/2} = (-1)^l He_l(x)`.
    ///
    /// `hermite` must hold `He_0` through at least `He_order`.
    pub fn conjugate_gaussian(&self, hermite: &[Polynomial<f64>]) -> Polynomial<f64> {
        let mut out = Polynomial::zero();
        for (l, &c) in self.coeffs().iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let signed = if l % 2 == 0 { c } else { -c };
            out = &out + &hermite[l].scale(&signed);
        }
        out
    }
}

impl Zero for OperatorPolynomial {
    fn zero() -> Self {
        Self(Polynomial::zero())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for OperatorPolynomial {
    fn one() -> Self {
        Self(Polynomial::one())
    }
}

impl Add for OperatorPolynomial {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self(&self.0 + &rhs.0)
    }
}

impl Mul for OperatorPolynomial {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self(&self.0 * &rhs.0)
    }
}

impl Ring for OperatorPolynomial {
    fn times(&self, c: u64) -> Self {
        Self(self.0.times(c))
    }
}

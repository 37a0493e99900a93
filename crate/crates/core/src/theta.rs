//! Parameter handling for the Ewens distribution.
//!
//! A rational parameter routes computations to exact big-integer paths; a
//! floating-point parameter routes to double-precision paths. Any finite
//! double is itself a dyadic rational, so [`RationalTheta::from_f64_exact`]
//! lets float inputs reach the exact paths without rounding.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{invalid, Error, Result};

/// Positive rational `numer / denom` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalTheta {
    numer: u64,
    denom: u64,
}

impl RationalTheta {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if numer == 0 || denom == 0 {
            return Err(invalid(format!(
                "theta = {numer}/{denom} must have a positive numerator and denominator"
            )));
        }
        let g = numer.gcd(&denom);
        Ok(Self {
            numer: numer / g,
            denom: denom / g,
        })
    }

    pub fn integer(value: u64) -> Result<Self> {
        Self::new(value, 1)
    }

    /// The exact dyadic rational equal to a positive finite double.
    pub fn from_f64_exact(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(invalid(format!("theta = {value} must be positive and finite")));
        }
        let bits = value.to_bits();
        let exponent = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & ((1u64 << 52) - 1);
        let (mantissa, exp2) = if exponent == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1u64 << 52), exponent - 1075)
        };
        let shift = mantissa.trailing_zeros() as i64;
        let mantissa = mantissa >> shift;
        let exp2 = exp2 + shift;
        if exp2 >= 0 {
            if exp2 > 63 || mantissa.leading_zeros() < exp2 as u32 {
                return Err(invalid(format!("theta = {value} is too large for an exact route")));
            }
            Self::new(mantissa << exp2, 1)
        } else {
            if -exp2 > 63 {
                return Err(invalid(format!("theta = {value} is too small for an exact route")));
            }
            Self::new(mantissa, 1u64 << (-exp2))
        }
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn to_f64(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }

    pub fn to_big_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer), BigInt::from(self.denom))
    }
}

impl fmt::Display for RationalTheta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

impl FromStr for RationalTheta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::ThetaParse(s.to_owned()));
        match s.split_once('/') {
            Some((p, q)) => Self::new(parse(p)?, parse(q)?).map_err(|_| Error::ThetaParse(s.to_owned())),
            None => Self::new(parse(s)?, 1).map_err(|_| Error::ThetaParse(s.to_owned())),
        }
    }
}

/// The Ewens parameter as given by the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theta {
    Rational(RationalTheta),
    Float(f64),
}

impl Theta {
    pub fn to_f64(&self) -> f64 {
        match self {
            Theta::Rational(r) => r.to_f64(),
            Theta::Float(x) => *x,
        }
    }

    /// Exact rational value: the given fraction, or the double's dyadic value.
    pub fn to_rational(&self) -> Result<RationalTheta> {
        match self {
            Theta::Rational(r) => Ok(*r),
            Theta::Float(x) => RationalTheta::from_f64_exact(*x),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Theta::Rational(_))
    }
}

impl From<RationalTheta> for Theta {
    fn from(r: RationalTheta) -> Self {
        Theta::Rational(r)
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Rational(r) => r.fmt(f),
            Theta::Float(x) => write!(f, "{x}"),
        }
    }
}

/// `"p/q"` parses as a rational; anything else as a positive decimal.
impl FromStr for Theta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.contains('/') {
            return s.parse::<RationalTheta>().map(Theta::Rational);
        }
        match s.trim().parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => Ok(Theta::Float(x)),
            _ => Err(Error::ThetaParse(s.to_owned())),
        }
    }
}

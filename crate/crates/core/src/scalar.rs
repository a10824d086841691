//! Numeric back-ends.
//!
//! Every comparison that decides a revealed-preference edge goes through
//! [`Scalar::le_tol`] and [`Scalar::lt_tol`]. For [`Exact`] they are plain rational
//! comparisons. For `f64` they carry a relative tolerance of
//! [`FLOAT_REL_TOL`] so that a breakpoint computed as a quotient still
//! compares as a tie against the products it came from.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, NumRef, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar.
pub type Exact = BigRational;

/// Relative tolerance used by the floating-point comparisons.
pub const FLOAT_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as a number")]
pub struct ParseScalarError {
    pub input: String,
}

pub trait Scalar:
    NumRef + Clone + Debug + Display + PartialOrd + Send + Sync + 'static
{
    /// `true` when arithmetic is exact and comparisons need no tolerance.
    const EXACT: bool;

    fn try_from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn parse_decimal(s: &str) -> Result<Self, ParseScalarError>;

    /// `self ≤ other`, up to the back-end's tolerance.
    fn le_tol(&self, other: &Self) -> bool;
    /// `self < other`, beyond the back-end's tolerance.
    fn lt_tol(&self, other: &Self) -> bool;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn midpoint(a: &Self, b: &Self) -> Self {
        (a.clone() + b) / (Self::one() + Self::one())
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn try_from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_decimal(s: &str) -> Result<Self, ParseScalarError> {
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|_| err(s))?;
            let d: f64 = d.trim().parse().map_err(|_| err(s))?;
            return Ok(n / d);
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(err(s)),
        }
    }

    fn le_tol(&self, other: &Self) -> bool {
        *self <= *other + FLOAT_REL_TOL * self.abs().max(other.abs())
    }

    fn lt_tol(&self, other: &Self) -> bool {
        *self < *other - FLOAT_REL_TOL * self.abs().max(other.abs())
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn try_from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // to_f64 only fails on overflow; keep the sign.
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn parse_decimal(s: &str) -> Result<Self, ParseScalarError> {
        parse_rational(s).ok_or_else(|| err(s))
    }

    fn le_tol(&self, other: &Self) -> bool {
        self <= other
    }

    fn lt_tol(&self, other: &Self) -> bool {
        self < other
    }
}

fn err(s: &str) -> ParseScalarError {
    ParseScalarError {
        input: s.to_string(),
    }
}

/// Parses `[-+]digits[.digits][e[-+]digits]` or `p/q` without passing
/// through binary floating point.
fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], i64::from_str(&s[i + 1..]).ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }

    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&all_digits).ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent.checked_sub(i64::try_from(frac_part.len()).ok()?)?;
    if scale.unsigned_abs() > 10_000 {
        return None;
    }
    let ten = BigInt::from_u8(10)?;
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Some(if scale >= 0 {
        BigRational::from_integer(numer * pow)
    } else {
        BigRational::new(numer, pow)
    })
}

/// Inner product.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y)
}

/// Convenience constructor for exact literals in tests and fixtures.
pub fn ratio(n: i64, d: i64) -> Exact {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational one.
pub fn exact_one() -> Exact {
    BigRational::one()
}

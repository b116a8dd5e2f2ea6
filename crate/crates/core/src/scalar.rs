//! Scalar fields behind the polynomial and matrix arithmetic.
//!
//! Two realizations: [`Rational`] (arbitrary-precision, every ring identity
//! holds exactly) and `f64`.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub trait Scalar: Clone + Debug + Display + PartialEq + PartialOrd + Signed + Send + Sync + 'static {
    /// Whether arithmetic is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Exact conversion for rationals (binary expansion of the float).
    fn from_f64(v: f64) -> Result<Self>;

    fn to_f64(&self) -> f64;

    /// Comparison tolerance: zero for exact scalars, machine epsilon for floats.
    fn epsilon() -> f64;

    fn to_json(&self) -> serde_json::Value;

    fn from_json(v: &serde_json::Value) -> Result<Self>;

    /// Parses integers, decimals (`0.25`, `1e-3`) and fractions (`3/4`).
    fn parse_text(s: &str) -> Result<Self>;

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    /// Relative-or-absolute closeness using [`Scalar::epsilon`].
    fn approx_eq(&self, other: &Self, ulps: f64) -> bool {
        if Self::EXACT {
            return self == other;
        }
        let a = self.to_f64();
        let b = other.to_f64();
        let scale = a.abs().max(b.abs()).max(1.0);
        (a - b).abs() <= ulps * Self::epsilon() * scale
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Result<Self> {
        Ok(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn epsilon() -> f64 {
        f64::EPSILON
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or_else(|| serde_json::Value::String(self.to_string()))
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("number {n} is not representable"))),
            serde_json::Value::String(s) => Self::parse_text(s),
            other => Err(Error::Parse(format!("expected a number, found {other}"))),
        }
    }

    fn parse_text(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') {
            return parse_rational(s).map(|r| Scalar::to_f64(&r));
        }
        s.parse::<f64>()
            .map_err(|_| Error::Parse(format!("`{s}` is not a number")))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Result<Self> {
        BigRational::from_float(v).ok_or(Error::NonFinite {
            context: "float to rational conversion",
        })
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn epsilon() -> f64 {
        0.0
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            // the textual form of a JSON number is an exact decimal
            serde_json::Value::Number(n) => parse_rational(&n.to_string()),
            serde_json::Value::String(s) => parse_rational(s),
            other => Err(Error::Parse(format!("expected a rational, found {other}"))),
        }
    }

    fn parse_text(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

/// `num/den` as an exact rational.
///
/// # Panics
/// Panics when `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational from `a/b`, an integer, or a decimal with optional exponent.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational number"));
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator {
                context: format!("rational literal `{s}`"),
            });
        }
        return Ok(BigRational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i64;
    if shift.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let ten = BigRational::from_integer(BigInt::from(10));
    let power = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= power;
    } else {
        value /= power;
    }
    Ok(if negative { -value } else { value })
}

/// `n!` as a scalar.
pub fn factorial<S: Scalar>(n: usize) -> S {
    (1..=n).fold(S::one(), |acc, k| acc * S::from_usize(k))
}

/// Falling factorial `n (n-1) ⋯ (n-k+1)`, zero when `k > n`.
pub fn falling_factorial<S: Scalar>(n: usize, k: usize) -> S {
    if k > n {
        return S::zero();
    }
    (0..k).fold(S::one(), |acc, i| acc * S::from_usize(n - i))
}

/// Integer power by repeated multiplication (`x^0 = 1`).
pub fn powi<S: Scalar>(x: &S, k: usize) -> S {
    let mut acc = S::one();
    for _ in 0..k {
        acc = acc * x.clone();
    }
    acc
}

pub fn max_abs<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> S {
    values
        .into_iter()
        .map(|v| v.abs())
        .fold(S::zero(), |acc, v| if v > acc { v } else { acc })
}

pub(crate) fn is_positive<S: Scalar>(v: &S) -> bool {
    *v > S::zero()
}

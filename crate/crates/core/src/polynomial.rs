//! Dense polynomials in the monomial basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::{falling_factorial, Scalar};

/// Domain of definition. Carried as metadata only; evaluation never clips.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };
}

impl Default for Interval {
    fn default() -> Self {
        Interval::REAL_LINE
    }
}

/// `Σ coeffs[n] xⁿ`, trailing zeros removed. The zero polynomial has no
/// coefficients and [`Polynomial::degree`] `None` (degree −∞).
///
/// Equality compares coefficients only.
#[derive(Clone, Debug)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
    interval: Interval,
}

impl<S: Scalar> Polynomial<S> {
    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        let mut p = Polynomial {
            coeffs,
            interval: Interval::default(),
        };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        Self::from_coeffs(Vec::new())
    }

    pub fn constant(c: S) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    /// `x^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k + 1];
        coeffs[k] = S::one();
        Self::from_coeffs(coeffs)
    }

    pub fn with_interval(mut self, interval: Interval) -> Self {
        self.interval = interval;
        self
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient vector padded with zeros to length `len`.
    pub fn padded_coeffs(&self, len: usize) -> Vec<S> {
        let mut out = self.coeffs.clone();
        out.resize(len.max(out.len()), S::zero());
        out
    }

    /// `order`-th derivative.
    pub fn differentiate(&self, order: usize) -> Self {
        if order >= self.coeffs.len() {
            return Self::zero().with_interval(self.interval);
        }
        let coeffs = self.coeffs[order..]
            .iter()
            .enumerate()
            .map(|(k, c)| c.clone() * falling_factorial::<S>(k + order, order))
            .collect();
        Self::from_coeffs(coeffs).with_interval(self.interval)
    }

    pub fn multiply(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero().with_interval(self.interval);
        }
        let mut coeffs = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(coeffs).with_interval(self.interval)
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x0: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x0.clone() + c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect()).with_interval(self.interval)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::from_coeffs(self.coeffs.iter().map(f).collect()).with_interval(self.interval)
    }

    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map(|c| c.to_f64())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| f(self.coeff(k), other.coeff(k))).collect();
        Self::from_coeffs(coeffs).with_interval(self.interval)
    }
}

impl<S: PartialEq> PartialEq for Polynomial<S> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<S: Scalar> Add for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(self, rhs: Self) -> Polynomial<S> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<S: Scalar> Sub for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, rhs: Self) -> Polynomial<S> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<S: Scalar> Mul for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn mul(self, rhs: Self) -> Polynomial<S> {
        self.multiply(rhs)
    }
}

impl<S: Scalar> Neg for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn neg(self) -> Polynomial<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Add for Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(self, rhs: Self) -> Polynomial<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, rhs: Self) -> Polynomial<S> {
        &self - &rhs
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{mag}x")?,
                _ if unit => write!(f, "x^{k}")?,
                _ => write!(f, "{mag}x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};
    use proptest::prelude::*;

    fn rp(c: &[i64]) -> Polynomial<Rational> {
        Polynomial::from_coeffs(c.iter().map(|&v| Rational::from_i64(v)).collect())
    }

    #[test]
    fn normalization_and_degree() {
        let p = rp(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.coeffs().len(), 2);
        let z = rp(&[0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn differentiate_examples() {
        assert_eq!(rp(&[0, 0, 1]).differentiate(1), rp(&[0, 2]));
        assert_eq!(rp(&[1]).differentiate(1), Polynomial::zero());
        // x^3 - x, second derivative 6x
        assert_eq!(rp(&[0, -1, 0, 1]).differentiate(2), rp(&[0, 6]));
        assert_eq!(rp(&[0, -1, 0, 1]).differentiate(0), rp(&[0, -1, 0, 1]));
        assert_eq!(rp(&[0, -1, 0, 1]).differentiate(9), Polynomial::zero());
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(rp(&[0, 1]).multiply(&rp(&[1, -1])), rp(&[0, 1, -1]));
        assert_eq!(Polynomial::zero().multiply(&rp(&[3, 4])), Polynomial::zero());
        assert_eq!(rp(&[1, 1]).multiply(&rp(&[1, 1])), rp(&[1, 2, 1]));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(rp(&[-1, 0, 1]).evaluate(&Rational::from_i64(0)), Rational::from_i64(-1));
        assert_eq!(rp(&[0, 1]).evaluate(&Rational::from_i64(1)), Rational::from_i64(1));
        assert_eq!(rp(&[2, 3, 1]).evaluate(&Rational::from_i64(2)), Rational::from_i64(12));
        assert_eq!(rp(&[0, 0, 1]).evaluate(&ratio(1, 3)), ratio(1, 9));
    }

    #[test]
    fn display() {
        assert_eq!(rp(&[1, -2, 0, 1]).to_string(), "1 - 2x + x^3");
        assert_eq!(rp(&[0, 0, -3]).to_string(), "-3x^2");
        assert_eq!(Polynomial::<f64>::zero().to_string(), "0");
    }

    #[test]
    fn interval_is_metadata() {
        let p = rp(&[0, 1]).with_interval(Interval::UNIT);
        assert_eq!(p.evaluate(&Rational::from_i64(5)), Rational::from_i64(5));
        assert_eq!(p.differentiate(1).interval(), Interval::UNIT);
        assert_eq!(p, rp(&[0, 1]));
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial<Rational>> {
        prop::collection::vec((-20i64..=20, 1i64..=6), 0..=11)
            .prop_map(|v| Polynomial::from_coeffs(v.into_iter().map(|(n, d)| ratio(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn leibniz_rule_exact(p in arb_poly(), q in arb_poly()) {
            let lhs = p.multiply(&q).differentiate(1);
            let rhs = &p.differentiate(1).multiply(&q) + &p.multiply(&q.differentiate(1));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn evaluation_is_linear(p in arb_poly(), q in arb_poly(),
                                a in -5i64..=5, b in -5i64..=5, x in -7i64..=7) {
            let (a, b, x) = (Rational::from_i64(a), Rational::from_i64(b), ratio(x, 3));
            let combo = &p.scale(&a) + &q.scale(&b);
            prop_assert_eq!(combo.evaluate(&x), a * p.evaluate(&x) + b * q.evaluate(&x));
        }

        #[test]
        fn derivative_orders_compose(p in arb_poly(), a in 0usize..5, b in 0usize..5) {
            prop_assert_eq!(p.differentiate(a + b), p.differentiate(a).differentiate(b));
        }

        #[test]
        fn product_degree_adds(p in arb_poly(), q in arb_poly()) {
            if let (Some(dp), Some(dq)) = (p.degree(), q.degree()) {
                prop_assert_eq!(p.multiply(&q).degree(), Some(dp + dq));
            }
        }
    }
}

//! Parametric generator families `A_θ = Σ_i p_i(x)·q_i(θ)·∂^i` and their
//! matrices on the truncated monomial basis `(1, x, …, x^N)`.
//!
//! Each term must satisfy `deg p_i ≤ i`, which makes `A_θ` map polynomials of
//! degree `≤ k` into themselves for every `k`. On the monomial basis the
//! matrix is therefore upper triangular and truncation at any `N` is exact.
//! The θ-dependence of a term is affine, `q_i(θ) = q0 + dq0·θ`.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::polynomial::{Interval, Polynomial};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorTerm<S> {
    p: Polynomial<S>,
    order: usize,
    q0: S,
    dq0: S,
}

impl<S: Scalar> GeneratorTerm<S> {
    /// Validates `order ≥ 1` and `deg p ≤ order`.
    pub fn new(p: Polynomial<S>, order: usize, q0: S, dq0: S) -> Result<Self> {
        Self::validated(0, p, order, q0, dq0)
    }

    fn validated(index: usize, p: Polynomial<S>, order: usize, q0: S, dq0: S) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder { index });
        }
        if let Some(degree) = p.degree() {
            if degree > order {
                return Err(Error::DegreeCondition { index, order, degree });
            }
        }
        Ok(GeneratorTerm { p, order, q0, dq0 })
    }

    pub fn p(&self) -> &Polynomial<S> {
        &self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn q0(&self) -> &S {
        &self.q0
    }

    pub fn dq0(&self) -> &S {
        &self.dq0
    }

    /// `q(θ) = q0 + dq0·θ`
    pub fn q(&self, theta: &S) -> S {
        self.q0.clone() + self.dq0.clone() * theta.clone()
    }

    /// `q(θ)·p·∂^order ξ`
    pub fn apply(&self, theta: &S, xi: &Polynomial<S>) -> Polynomial<S> {
        let q = self.q(theta);
        if q.is_zero() {
            return Polynomial::zero();
        }
        self.p.multiply(&xi.differentiate(self.order)).scale(&q)
    }

    fn map<T: Scalar>(&self, f: &impl Fn(&S) -> T) -> GeneratorTerm<T> {
        GeneratorTerm {
            p: self.p.map(f),
            order: self.order,
            q0: f(&self.q0),
            dq0: f(&self.dq0),
        }
    }
}

/// The family `θ ↦ A_θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorFamily<S> {
    terms: Vec<GeneratorTerm<S>>,
    interval: Interval,
}

impl<S: Scalar> GeneratorFamily<S> {
    pub fn new(terms: Vec<GeneratorTerm<S>>) -> Self {
        GeneratorFamily {
            terms,
            interval: Interval::default(),
        }
    }

    /// The family with no terms, `A_θ = 0`.
    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn with_interval(mut self, interval: Interval) -> Self {
        self.interval = interval;
        self
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn terms(&self) -> &[GeneratorTerm<S>] {
        &self.terms
    }

    pub fn is_theta_independent(&self) -> bool {
        self.terms.iter().all(|t| t.dq0.is_zero())
    }

    /// `A_θ ξ`
    pub fn apply(&self, theta: &S, xi: &Polynomial<S>) -> Polynomial<S> {
        self.terms
            .iter()
            .fold(Polynomial::zero(), |acc, term| &acc + &term.apply(theta, xi))
            .with_interval(xi.interval())
    }

    /// `(N+1)×(N+1)` matrix of `A_θ`; column `j` holds the coefficients of
    /// `A_θ x^j`.
    pub fn matrix(&self, theta: &S, n: usize) -> OperatorMatrix<S> {
        let mut m = OperatorMatrix::zeros(n + 1);
        for j in 0..=n {
            let image = self.apply(theta, &Polynomial::monomial(j));
            for (i, c) in image.coeffs().iter().enumerate() {
                m.set(i, j, c.clone());
            }
        }
        m
    }

    /// `A₀' = ∂A_θ/∂θ|₀ = Σ dq0_i·p_i·∂^i`, returned as a θ-independent family.
    pub fn derivative_at_zero(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| !t.dq0.is_zero())
            .map(|t| GeneratorTerm {
                p: t.p.clone(),
                order: t.order,
                q0: t.dq0.clone(),
                dq0: S::zero(),
            })
            .collect();
        GeneratorFamily {
            terms,
            interval: self.interval,
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> GeneratorFamily<T> {
        GeneratorFamily {
            terms: self.terms.iter().map(|t| t.map(&f)).collect(),
            interval: self.interval,
        }
    }

    pub fn to_f64(&self) -> GeneratorFamily<f64> {
        self.map(|c| c.to_f64())
    }

    /// Parses the JSON family description:
    ///
    /// ```json
    /// { "interval": [0, 1],
    ///   "terms": [ { "order": 1, "p_coeffs": ["1", "-1"], "q0": 0, "dq0": 1 } ] }
    /// ```
    ///
    /// Scalars are JSON numbers or `"num/den"` strings. Extra top-level keys
    /// are ignored so the same document can carry other data.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: FamilyDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Self> {
        let doc = FamilyDocument::deserialize(value)?;
        Self::from_document(&doc)
    }

    fn from_document(doc: &FamilyDocument) -> Result<Self> {
        let terms = doc
            .terms
            .iter()
            .enumerate()
            .map(|(index, t)| {
                let coeffs = t.p_coeffs.iter().map(S::from_json).collect::<Result<Vec<_>>>()?;
                GeneratorTerm::validated(
                    index,
                    Polynomial::from_coeffs(coeffs),
                    t.order,
                    S::from_json(&t.q0)?,
                    S::from_json(&t.dq0)?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let interval = match doc.interval {
            Some([lo, hi]) => Interval { lo, hi },
            None => Interval::default(),
        };
        Ok(GeneratorFamily::new(terms).with_interval(interval))
    }
}

#[derive(Debug, Deserialize)]
struct FamilyDocument {
    terms: Vec<TermDocument>,
    #[serde(default)]
    interval: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDocument {
    order: usize,
    p_coeffs: Vec<serde_json::Value>,
    q0: serde_json::Value,
    dq0: serde_json::Value,
}

/// Square matrix stored row-major. `entries[i][j]` is the coefficient of
/// `x^i` in the image of `x^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<S> {
    dim: usize,
    entries: Vec<S>,
}

impl<S: Scalar> OperatorMatrix<S> {
    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix {
            dim,
            entries: vec![S::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(OperatorMatrix { dim, entries })
    }

    /// Number of rows (`N + 1`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Truncation degree `N`.
    pub fn degree(&self) -> usize {
        self.dim.saturating_sub(1)
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    /// `M v`
    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        self.check_len(v.len())?;
        Ok((0..self.dim)
            .map(|i| (0..self.dim).fold(S::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone()))
            .collect())
    }

    /// `Mᵀ v`: the adjoint action on a moment vector.
    pub fn transpose_mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        self.check_len(v.len())?;
        Ok((0..self.dim)
            .map(|j| (0..self.dim).fold(S::zero(), |acc, i| acc + self.get(i, j).clone() * v[i].clone()))
            .collect())
    }

    /// Applies the matrix to the coefficient vector of `p`.
    pub fn apply_poly(&self, p: &Polynomial<S>) -> Result<Polynomial<S>> {
        if let Some(degree) = p.degree() {
            if degree > self.degree() {
                return Err(Error::DegreeOverflow {
                    degree,
                    truncation: self.degree(),
                });
            }
        }
        let out = self.mul_vec(&p.padded_coeffs(self.dim))?;
        Ok(Polynomial::from_coeffs(out).with_interval(p.interval()))
    }

    /// Matrix product, summed left to right.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_len(other.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.entries[idx] = out.entries[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> OperatorMatrix<T> {
        OperatorMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> OperatorMatrix<f64> {
        self.map(|c| c.to_f64())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> S {
        crate::scalar::max_abs(&self.entries)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> S {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(S::zero(), |acc, j| acc + self.get(i, j).abs()))
            .fold(S::zero(), |acc, v| if v > acc { v } else { acc })
    }

    /// Copies the `rows × cols` block starting at `(r0, c0)` into a square matrix.
    pub fn block(&self, r0: usize, c0: usize, size: usize) -> Self {
        let mut out = Self::zeros(size);
        for i in 0..size {
            for j in 0..size {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Result<Self> {
        self.check_len(other.dim)?;
        Ok(OperatorMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        })
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: len,
            });
        }
        Ok(())
    }
}

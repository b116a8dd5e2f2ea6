//! Linear functionals on polynomials, stored as truncated moment sequences
//! `m_n = ⟨xⁿ | μ⟩`.
//!
//! A functional on `R(I)` is determined by its values on monomials, so the
//! moment vector is a faithful representation even for objects that are not
//! measures (the derivative-at-zero functional, the θ-derivative of the
//! Beta family at θ = 0).

use std::io::Write;

use serde_json::json;

use crate::error::{Error, Result};
use crate::operator::OperatorMatrix;
use crate::polynomial::Polynomial;
use crate::scalar::{is_positive, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct MomentFunctional<S> {
    moments: Vec<S>,
    probability: bool,
}

impl<S: Scalar> MomentFunctional<S> {
    /// A general functional with the given moments `m₀, …, m_N`.
    ///
    /// # Panics
    /// Panics on an empty moment vector.
    pub fn new(moments: Vec<S>) -> Self {
        assert!(!moments.is_empty(), "a moment functional needs m_0");
        MomentFunctional {
            moments,
            probability: false,
        }
    }

    /// Marks the functional as a probability distribution (`m₀ = 1`).
    pub fn probability(moments: Vec<S>) -> Result<Self> {
        if moments.first().is_none_or(|m0| !m0.is_one()) {
            return Err(Error::InvalidParameter {
                name: "moments",
                value: format!("{:?}", moments.first()),
                reason: "a probability functional must have m_0 = 1",
            });
        }
        Ok(MomentFunctional {
            moments,
            probability: true,
        })
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![S::zero(); n + 1])
    }

    pub fn moments(&self) -> &[S] {
        &self.moments
    }

    pub fn moment(&self, k: usize) -> &S {
        &self.moments[k]
    }

    /// Truncation degree `N`.
    pub fn degree(&self) -> usize {
        self.moments.len() - 1
    }

    pub fn is_probability(&self) -> bool {
        self.probability
    }

    pub fn is_zero(&self) -> bool {
        self.moments.iter().all(|m| m.is_zero())
    }

    /// `⟨ξ | μ⟩ = Σ ξ_n m_n`. Fails when `deg ξ > N`.
    pub fn pair(&self, xi: &Polynomial<S>) -> Result<S> {
        if let Some(degree) = xi.degree() {
            if degree > self.degree() {
                return Err(Error::DegreeOverflow {
                    degree,
                    truncation: self.degree(),
                });
            }
        }
        Ok(xi
            .coeffs()
            .iter()
            .zip(&self.moments)
            .fold(S::zero(), |acc, (c, m)| acc + c.clone() * m.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_degree(other.degree())?;
        Ok(Self::new(
            self.moments
                .iter()
                .zip(&other.moments)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_degree(other.degree())?;
        Ok(Self::new(
            self.moments
                .iter()
                .zip(&other.moments)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        ))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.moments.iter().map(|m| m.clone() * c.clone()).collect())
    }

    /// Keeps `m₀, …, m_n`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.degree() {
            return Err(Error::DegreeOverflow {
                degree: n,
                truncation: self.degree(),
            });
        }
        Ok(MomentFunctional {
            moments: self.moments[..=n].to_vec(),
            probability: self.probability,
        })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MomentFunctional<T> {
        MomentFunctional {
            moments: self.moments.iter().map(f).collect(),
            probability: self.probability,
        }
    }

    pub fn to_f64(&self) -> MomentFunctional<f64> {
        self.map(|m| m.to_f64())
    }

    /// Writes CSV rows `n,m_n`. Exact scalars are written as `num/den`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "m_n"])?;
        for (n, m) in self.moments.iter().enumerate() {
            w.write_record([n.to_string(), m.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `{"degree": N, "probability": bool, "moments": [...]}`; exact scalars
    /// become `"num/den"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "degree": self.degree(),
            "probability": self.probability,
            "moments": self.moments.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let moments = value
            .get("moments")
            .unwrap_or(value)
            .as_array()
            .ok_or_else(|| Error::Parse("expected an array of moments".into()))?
            .iter()
            .map(S::from_json)
            .collect::<Result<Vec<_>>>()?;
        if moments.is_empty() {
            return Err(Error::Parse("moment array is empty".into()));
        }
        let probability = value.get("probability").and_then(|p| p.as_bool()).unwrap_or(false);
        if probability {
            Self::probability(moments)
        } else {
            Ok(Self::new(moments))
        }
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n != self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.moments.len(),
                found: n + 1,
            });
        }
        Ok(())
    }
}

/// `⟨ξ | μ⟩`
pub fn pair<S: Scalar>(xi: &Polynomial<S>, mu: &MomentFunctional<S>) -> Result<S> {
    mu.pair(xi)
}

/// Point evaluation at `a`: `m_k = a^k`.
pub fn dirac<S: Scalar>(a: S, n: usize) -> MomentFunctional<S> {
    let mut moments = Vec::with_capacity(n + 1);
    let mut power = S::one();
    for _ in 0..=n {
        moments.push(power.clone());
        power = power * a.clone();
    }
    MomentFunctional {
        moments,
        probability: true,
    }
}

/// Moments of Beta(θ, κ): `m_k = Π_{i<k} (θ+i)/(θ+κ+i)`, computed by the
/// telescoping product.
pub fn beta_moments<S: Scalar>(theta: S, kappa: S, n: usize) -> Result<MomentFunctional<S>> {
    require_positive("theta", &theta)?;
    require_positive("kappa", &kappa)?;
    let mut moments = Vec::with_capacity(n + 1);
    let mut m = S::one();
    moments.push(m.clone());
    for i in 0..n {
        let i = S::from_usize(i);
        m = m * (theta.clone() + i.clone()) / (theta.clone() + kappa.clone() + i);
        moments.push(m.clone());
    }
    Ok(MomentFunctional {
        moments,
        probability: true,
    })
}

/// `lim_{θ→0} θ⁻¹ (Beta(θ,κ) − δ₀)` on monomials:
/// `m₀ = 0`, `m_k = (k−1)! / Π_{i<k} (κ+i) = Γ(k)Γ(κ)/Γ(κ+k)`.
pub fn wf_stationary_derivative<S: Scalar>(kappa: S, n: usize) -> Result<MomentFunctional<S>> {
    require_positive("kappa", &kappa)?;
    let mut moments = Vec::with_capacity(n + 1);
    moments.push(S::zero());
    // m_k = m_{k-1}·(k-1)/(κ+k-1) for k ≥ 2, m_1 = 1/κ
    let mut m = S::zero();
    for k in 1..=n {
        m = if k == 1 {
            S::one() / kappa.clone()
        } else {
            m * S::from_usize(k - 1) / (kappa.clone() + S::from_usize(k - 1))
        };
        moments.push(m.clone());
    }
    Ok(MomentFunctional::new(moments))
}

/// Moments of N(mean, variance): `m_k = mean·m_{k−1} + (k−1)·variance·m_{k−2}`.
pub fn gaussian_moments<S: Scalar>(mean: S, variance: S, n: usize) -> Result<MomentFunctional<S>> {
    require_positive("variance", &variance)?;
    let mut moments: Vec<S> = Vec::with_capacity(n + 1);
    moments.push(S::one());
    if n >= 1 {
        moments.push(mean.clone());
    }
    for k in 2..=n {
        let next =
            mean.clone() * moments[k - 1].clone() + S::from_usize(k - 1) * variance.clone() * moments[k - 2].clone();
        moments.push(next);
    }
    Ok(MomentFunctional {
        moments,
        probability: true,
    })
}

/// `ξ ↦ ξ'(0)`: `m₁ = 1`, all other moments zero.
pub fn derivative_at_zero<S: Scalar>(n: usize) -> MomentFunctional<S> {
    let mut moments = vec![S::zero(); n + 1];
    if n >= 1 {
        moments[1] = S::one();
    }
    MomentFunctional::new(moments)
}

/// `M* μ`, defined by `⟨Mξ | μ⟩ = ⟨ξ | M*μ⟩`: the transpose acting on the
/// moment vector, `(M*μ)_j = Σ_i M[i][j] m_i`.
pub fn adjoint_apply<S: Scalar>(m: &OperatorMatrix<S>, mu: &MomentFunctional<S>) -> Result<MomentFunctional<S>> {
    Ok(MomentFunctional::new(m.transpose_mul_vec(mu.moments())?))
}

fn require_positive<S: Scalar>(name: &'static str, v: &S) -> Result<()> {
    if !is_positive(v) {
        return Err(Error::InvalidParameter {
            name,
            value: v.to_string(),
            reason: "must be positive",
        });
    }
    Ok(())
}

//! Built-in Wright–Fisher and Ornstein–Uhlenbeck families, the Wright–Fisher
//! quasi-eigenbasis and its sensitivity recursion.
//!
//! Wright–Fisher with mutation rates θ (towards the allele) and κ (away):
//!
//! ```text
//! A_θ = θ(1−x)∂ − κx∂ + x(1−x)∂²        on [0, 1]
//! ```
//!
//! Its stationary law is Beta(θ, κ) for θ > 0 and δ₀ for θ = 0. The
//! population-genetics normalization with `½x(1−x)∂²` is available through
//! [`WfDiffusion::Half`].
//!
//! Ornstein–Uhlenbeck with location θ and unit diffusion:
//!
//! ```text
//! A_θ = (θ − x)∂ + ½∂²                   on ℝ
//! ```
//!
//! with stationary law N(θ, ½).
//!
//! For θ = 0 the Wright–Fisher generator is upper triangular with
//! eigenvalues `λ_n = n(−κ−n+1)` but it is not diagonalized by monomials. The
//! polynomials `ξ_n = Σ_{m=2}^n γ_{n,m} x^m` satisfy
//! `A₀ᵏ[ξ_n + b_{n,0}x + a] = λ_nᵏ ξ_n + b_{n,k} x`, and the sensitivity of
//! `⟨ξ_n | U_θ(t)*δ₀⟩` collapses to the scalar series `Σ tᵏ/k! b_{n,k−1}`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::operator::{GeneratorFamily, GeneratorTerm};
use crate::polynomial::{Interval, Polynomial};
use crate::scalar::{is_positive, powi, Rational, Scalar};

/// Normalization of the Wright–Fisher diffusion term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WfDiffusion {
    /// `x(1−x)∂²`, the normalization all built-in checks use.
    #[default]
    Standard,
    /// `½x(1−x)∂²`.
    Half,
}

pub fn wf_family<S: Scalar>(kappa: S) -> Result<GeneratorFamily<S>> {
    wf_family_with(kappa, WfDiffusion::Standard)
}

pub fn wf_family_with<S: Scalar>(kappa: S, diffusion: WfDiffusion) -> Result<GeneratorFamily<S>> {
    require_positive_kappa(&kappa)?;
    let diffusion_coeff = match diffusion {
        WfDiffusion::Standard => S::one(),
        WfDiffusion::Half => S::one() / S::from_i64(2),
    };
    let one = S::one;
    let terms = vec![
        GeneratorTerm::new(Polynomial::from_coeffs(vec![one(), -one()]), 1, S::zero(), one())?,
        GeneratorTerm::new(Polynomial::monomial(1), 1, -kappa, S::zero())?,
        GeneratorTerm::new(
            Polynomial::from_coeffs(vec![S::zero(), one(), -one()]),
            2,
            diffusion_coeff,
            S::zero(),
        )?,
    ];
    Ok(GeneratorFamily::new(terms).with_interval(Interval::UNIT))
}

pub fn ou_family<S: Scalar>() -> GeneratorFamily<S> {
    let terms = vec![
        GeneratorTerm::new(Polynomial::one(), 1, S::zero(), S::one()),
        GeneratorTerm::new(Polynomial::monomial(1), 1, -S::one(), S::zero()),
        GeneratorTerm::new(Polynomial::one(), 2, S::one() / S::from_i64(2), S::zero()),
    ];
    let terms = terms
        .into_iter()
        .collect::<Result<Vec<_>>>()
        .expect("OU terms satisfy the degree condition");
    GeneratorFamily::new(terms).with_interval(Interval::REAL_LINE)
}

/// `λ_n = n(−κ−n+1)`, the `n`-th diagonal entry of the θ = 0 Wright–Fisher matrix.
pub fn wf_lambda<S: Scalar>(n: usize, kappa: &S) -> S {
    let n_s = S::from_usize(n);
    n_s.clone() * (-kappa.clone() - n_s + S::one())
}

#[derive(Clone, Debug, PartialEq)]
pub struct WfBasisElement<S> {
    pub n: usize,
    pub kappa: S,
    /// `gammas[m] = γ_{n,m}` for `2 ≤ m ≤ n`; entries 0 and 1 are zero.
    pub gammas: Vec<S>,
    pub xi: Polynomial<S>,
    pub lambda: S,
}

impl<S: Scalar> WfBasisElement<S> {
    pub fn gamma(&self, m: usize) -> &S {
        &self.gammas[m]
    }

    /// `b_{n,1} − (−κ)b_{n,0} = 2γ_{n,2}`
    pub fn two_gamma2(&self) -> S {
        S::from_i64(2) * self.gammas[2].clone()
    }
}

/// `γ_{n,n} = 1`, `γ_{n,m−1} = m(m−1)/(λ_n − λ_{m−1})·γ_{n,m}` for `3 ≤ m ≤ n`.
pub fn wf_basis<S: Scalar>(n: usize, kappa: S) -> Result<WfBasisElement<S>> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: n.to_string(),
            reason: "basis elements start at n = 2",
        });
    }
    let lambda = wf_lambda(n, &kappa);
    let mut gammas = vec![S::zero(); n + 1];
    gammas[n] = S::one();
    for m in (3..=n).rev() {
        let denom = lambda.clone() - wf_lambda(m - 1, &kappa);
        if denom.is_zero() {
            return Err(Error::ZeroDenominator {
                context: format!("γ recursion at n={n}, m={m}, κ={kappa}"),
            });
        }
        gammas[m - 1] = S::from_usize(m * (m - 1)) / denom * gammas[m].clone();
    }
    let mut coeffs = gammas.clone();
    coeffs[0] = S::zero();
    coeffs[1] = S::zero();
    Ok(WfBasisElement {
        n,
        kappa,
        gammas,
        xi: Polynomial::from_coeffs(coeffs).with_interval(Interval::UNIT),
        lambda,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WfBSequence<S> {
    pub n: usize,
    pub kappa: S,
    /// `bs[k] = b_{n,k}` for `0 ≤ k ≤ kmax`.
    pub bs: Vec<S>,
}

impl<S: Scalar> WfBSequence<S> {
    pub fn b0(&self) -> &S {
        &self.bs[0]
    }
}

/// `b_{n,k} = −κ b_{n,k−1} + λ_n^{k−1}·2γ_{n,2}`.
pub fn wf_b_sequence<S: Scalar>(n: usize, kappa: S, b0: S, kmax: usize) -> Result<WfBSequence<S>> {
    let basis = wf_basis(n, kappa.clone())?;
    Ok(b_sequence_from(&basis, b0, kmax))
}

fn b_sequence_from<S: Scalar>(basis: &WfBasisElement<S>, b0: S, kmax: usize) -> WfBSequence<S> {
    let two_gamma2 = basis.two_gamma2();
    let mut bs = Vec::with_capacity(kmax + 1);
    bs.push(b0);
    let mut lambda_pow = S::one();
    for k in 1..=kmax {
        let next = -basis.kappa.clone() * bs[k - 1].clone() + lambda_pow.clone() * two_gamma2.clone();
        bs.push(next);
        lambda_pow = lambda_pow * basis.lambda.clone();
    }
    WfBSequence {
        n: basis.n,
        kappa: basis.kappa.clone(),
        bs,
    }
}

/// `λ_nᵏ ξ_n + b_{n,k} x`, the value of `A₀ᵏ[ξ_n + b0·x + a]`.
///
/// The constant `a` is annihilated by `A₀` and does not enter the result; it
/// is accepted so the call mirrors the full left-hand side.
pub fn wf_quasi_eigen_power<S: Scalar>(n: usize, kappa: S, k: usize, b0: S, a: S) -> Result<Polynomial<S>> {
    let _ = a;
    let basis = wf_basis(n, kappa)?;
    let b = b_sequence_from(&basis, b0, k);
    let rhs = &basis.xi.scale(&powi(&basis.lambda, k)) + &Polynomial::monomial(1).scale(&b.bs[k]);
    Ok(rhs.with_interval(Interval::UNIT))
}

/// Result of the scalar series `Σ_{k=1}^{kmax} tᵏ/k! b_{n,k−1}` (with `b_{n,0} = 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct WfXiSensitivity {
    pub n: usize,
    pub t: f64,
    pub value: f64,
    /// The partial sum, exact in `t` and κ.
    pub partial_sum: Rational,
    pub kmax: usize,
    /// Rigorous bound on the neglected tail.
    pub tail_bound: f64,
}

pub const WF_SERIES_MAX_TERMS: usize = 400;

/// `⟨ξ_n | ∂_θ U_θ(t)*δ₀|₀⟩ = Σ_{k≥1} tᵏ/k! b_{n,k−1}` with `b_{n,0} = 0`.
///
/// The terms alternate with magnitude up to `e^{|λ_n| t}`, so the partial sum
/// is accumulated in exact rationals (`t` is taken at its exact binary value)
/// and rounded once. The default `kmax` is the smallest `k` with
/// `(|λ_n| t)^k / k! < tol/100`, capped at 400. The neglected tail is bounded
/// with `|b_{n,k}| ≤ 4|γ_{n,2}| |λ_n|^k / |λ_n + κ|`, which follows from the
/// closed form `b_{n,k} = 2γ_{n,2}(λ_nᵏ − (−κ)ᵏ)/(λ_n + κ)`; a bound above `tol`
/// is an error.
pub fn wf_xi_sensitivity(n: usize, kappa: &Rational, t: f64, kmax: Option<usize>, tol: f64) -> Result<WfXiSensitivity> {
    require_positive_kappa(kappa)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t.to_string(),
            reason: "time must be finite and nonnegative",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol.to_string(),
            reason: "tolerance must be positive",
        });
    }
    let basis = wf_basis(n, kappa.clone())?;
    let lambda_abs = Scalar::to_f64(&basis.lambda.abs());
    let x = lambda_abs * t;
    let kmax = kmax.unwrap_or_else(|| default_kmax(x, tol));

    let t_exact = <Rational as Scalar>::from_f64(t)?;
    let b = b_sequence_from(&basis, Rational::zero(), kmax.saturating_sub(1));
    let mut sum = Rational::zero();
    let mut coef = Rational::one(); // tᵏ/k!
    for k in 1..=kmax {
        coef = coef * t_exact.clone() / Rational::from_usize(k);
        sum += coef.clone() * b.bs[k - 1].clone();
    }

    let lambda_plus_kappa = Scalar::to_f64(&(basis.lambda.clone() + kappa.clone()).abs());
    let gamma2 = Scalar::to_f64(&basis.gammas[2].abs());
    let c = 4.0 * gamma2 / (lambda_abs * lambda_plus_kappa);
    let tail_bound = c * exp_term_tail(x, kmax);
    if !(tail_bound <= tol) {
        return Err(Error::TailBound {
            kmax,
            bound: tail_bound,
            tol,
        });
    }
    Ok(WfXiSensitivity {
        n,
        t,
        value: <Rational as Scalar>::to_f64(&sum),
        partial_sum: sum,
        kmax,
        tail_bound,
    })
}

/// Smallest `k ≥ 1` with `x^k/k! < tol/100`, capped at [`WF_SERIES_MAX_TERMS`].
pub fn default_kmax(x: f64, tol: f64) -> usize {
    let target = (tol * 1e-2).ln();
    let mut log_term = 0.0;
    for k in 1..=WF_SERIES_MAX_TERMS {
        log_term += x.ln() - (k as f64).ln();
        if log_term < target {
            return k;
        }
    }
    WF_SERIES_MAX_TERMS
}

/// Bound on `Σ_{k>K} x^k/k!` by the geometric majorant of the first term.
fn exp_term_tail(x: f64, kmax: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let k1 = kmax + 1;
    let ratio = x / (k1 as f64 + 1.0);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    let log_first = k1 as f64 * x.ln() - ln_factorial(k1);
    log_first.exp() / (1.0 - ratio)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `∂/∂θ|₀ ⟨xⁿ | N((1−e^{−t})θ, ½)⟩ = (1−e^{−t})·n·g_{n−1}` with `g_k` the
/// N(0, ½) moments `g_{2j} = (2j−1)!!/2^j`, `g_{2j+1} = 0`.
pub fn ou_moment_sensitivity_closed_form(n: usize, t: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let k = n - 1;
    if k % 2 == 1 {
        return 0.0;
    }
    let g = (1..=k / 2).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 / 2.0);
    -(-t).exp_m1() * n as f64 * g
}

fn require_positive_kappa<S: Scalar>(kappa: &S) -> Result<()> {
    if !is_positive(kappa) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            value: kappa.to_string(),
            reason: "must be positive",
        });
    }
    Ok(())
}

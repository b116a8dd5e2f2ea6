//! Validation suites run by `semisens validate <scope>`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::duality::{beta_moments, derivative_at_zero, dirac, gaussian_moments, wf_stationary_derivative};
use crate::errata::{errata, Erratum};
use crate::error::{Error, Result};
use crate::models::{
    ou_family, ou_moment_sensitivity_closed_form, wf_b_sequence, wf_basis, wf_family, wf_quasi_eigen_power,
    wf_xi_sensitivity,
};
use crate::oracle::{central_difference_sensitivity, stationarity_residual, OracleConfig};
use crate::polynomial::Polynomial;
use crate::scalar::{ratio, Rational, Scalar};
use crate::semigroup::{apply_v0, integral_propagator};
use crate::sensitivity::{nu_functional, product_condition_check, semigroup_sensitivity, stationary_derivative_check};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    All,
    Stationarity,
    Lemma,
    Theorem,
    Recursion,
    Errata,
}

impl FromStr for Scope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Scope::All,
            "stationarity" => Scope::Stationarity,
            "lemma" => Scope::Lemma,
            "theorem" => Scope::Theorem,
            "recursion" => Scope::Recursion,
            "errata" => Scope::Errata,
            other => return Err(Error::Parse(format!("unknown validation scope `{other}`"))),
        })
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Scope::All => "all",
            Scope::Stationarity => "stationarity",
            Scope::Lemma => "lemma",
            Scope::Theorem => "theorem",
            Scope::Recursion => "recursion",
            Scope::Errata => "errata",
        };
        f.write_str(name)
    }
}

/// One assertion: `value ≤ bound`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            suite,
            name: name.into(),
            value,
            bound,
            passed: value <= bound,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} [{}] {}: {:e} (bound {:e})",
            self.suite, self.name, self.value, self.bound
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub scope: Scope,
    pub checks: Vec<Check>,
    /// Present for the errata scope (and `all`).
    pub errata: Option<Vec<Erratum>>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

pub fn run(scope: Scope) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut errata_entries = None;
    let wants = |s: Scope| scope == Scope::All || scope == s;
    if wants(Scope::Stationarity) {
        checks.extend(stationarity()?);
    }
    if wants(Scope::Lemma) {
        checks.extend(lemma()?);
    }
    if wants(Scope::Theorem) {
        checks.extend(theorem()?);
    }
    if wants(Scope::Recursion) {
        checks.extend(recursion()?);
    }
    if wants(Scope::Errata) {
        let entries = errata()?;
        for e in &entries {
            checks.push(Check::new(
                "errata",
                format!("{} confirmed", e.id),
                if e.confirmed { 0.0 } else { 1.0 },
                0.0,
            ));
        }
        errata_entries = Some(entries);
    }
    Ok(SuiteReport {
        scope,
        checks,
        errata: errata_entries,
    })
}

fn rationals(values: &[(i64, i64)]) -> Vec<Rational> {
    values.iter().map(|(n, d)| ratio(*n, *d)).collect()
}

/// Beta laws are exactly stationary for Wright–Fisher; Gaussians for OU.
pub fn stationarity() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for theta in rationals(&[(1, 10), (1, 1), (3, 1)]) {
        for kappa in rationals(&[(1, 2), (1, 1), (2, 1)]) {
            let wf = wf_family(kappa.clone())?;
            let beta = beta_moments(theta.clone(), kappa.clone(), 16)?;
            let r = stationarity_residual(&wf, &theta, &beta, 16)?;
            checks.push(Check::new(
                "stationarity",
                format!("WF Beta({theta},{kappa}) exact residual, degree 16"),
                Scalar::to_f64(&r),
                0.0,
            ));
        }
    }
    for theta in [0.0, 0.5, 1.0] {
        let g = gaussian_moments(theta, 0.5, 12)?;
        let r = stationarity_residual(&ou_family(), &theta, &g, 12)?;
        checks.push(Check::new(
            "stationarity",
            format!("OU N({theta},1/2) residual, degree 12"),
            r,
            1e-12,
        ));
    }
    let wf = wf_family(Rational::one())?;
    let r = stationarity_residual(&wf, &Rational::zero(), &dirac(Rational::zero(), 16), 16)?;
    checks.push(Check::new(
        "stationarity",
        "WF δ₀ at θ=0 exact residual",
        Scalar::to_f64(&r),
        0.0,
    ));
    Ok(checks)
}

/// `A₀*π₀′ = −ν` exactly, and the product condition.
pub fn lemma() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for kappa in rationals(&[(1, 2), (1, 1), (2, 1), (7, 3)]) {
        let wf = wf_family(kappa.clone())?;
        let nu = nu_functional(&wf, &dirac(Rational::zero(), 16), 16)?;
        let nu_ok = if nu == derivative_at_zero(16) { 0.0 } else { 1.0 };
        checks.push(Check::new("lemma", format!("WF κ={kappa}: ν = ∂/∂x|₀"), nu_ok, 0.0));
        let pi0_prime = wf_stationary_derivative(kappa.clone(), 16)?;
        let r = stationary_derivative_check(&wf, &pi0_prime, &nu, 16)?;
        checks.push(Check::new(
            "lemma",
            format!("WF κ={kappa}: A₀*π₀′ + ν exact residual, degree 16"),
            Scalar::to_f64(&r),
            0.0,
        ));
    }
    let thetas = [1e-2, 1e-3, 1e-4, 1e-5];
    for kappa in [0.5, 1.0, 2.0] {
        let wf = wf_family(kappa)?;
        let seq = product_condition_check(&wf, |th| beta_moments(*th, kappa, 6), &dirac(0.0, 6), &thetas, 6)?;
        let increases = seq.windows(2).filter(|w| w[1] >= w[0]).count();
        checks.push(Check::new(
            "lemma",
            format!("WF κ={kappa}: product condition decreasing in θ"),
            increases as f64,
            0.0,
        ));
        checks.push(Check::new(
            "lemma",
            format!("WF κ={kappa}: product condition at θ=1e-5"),
            *seq.last().expect("nonempty"),
            1e-4,
        ));
    }
    Ok(checks)
}

/// Sensitivity against the oracle and closed forms.
pub fn theorem() -> Result<Vec<Check>> {
    let n = 16;
    let tol = crate::semigroup::DEFAULT_TOL;
    let config = OracleConfig::default();
    let times = [0.1, 0.5, 1.0, 2.0];
    let mut checks = Vec::new();

    let mut cases: Vec<(String, crate::GeneratorFamily<f64>, crate::MomentFunctional<f64>)> = Vec::new();
    for kappa in [0.5, 1.0, 2.0] {
        cases.push((format!("WF κ={kappa}"), wf_family(kappa)?, dirac(0.0, n)));
    }
    cases.push(("OU".into(), ou_family(), gaussian_moments(0.0, 0.5, n)?));
    for (label, family, pi0) in &cases {
        let mut worst: f64 = 0.0;
        for j in 0..=3 {
            let xi = Polynomial::monomial(j);
            for &t in &times {
                let s = semigroup_sensitivity(family, pi0, &xi, t, n, tol)?;
                let o = central_difference_sensitivity(family, pi0, &xi, t, n, &config)?;
                worst = worst.max((s - o.value).abs());
            }
        }
        checks.push(Check::new(
            "theorem",
            format!("{label}: |⟨V₀(t)ξ|ν⟩ − oracle|, ξ ≤ x³"),
            worst,
            1e-6,
        ));
    }

    for kappa in [0.5f64, 1.0, 2.0] {
        let wf = wf_family(kappa)?;
        let mut worst: f64 = 0.0;
        for &t in &times {
            let s = semigroup_sensitivity(&wf, &dirac(0.0, n), &Polynomial::monomial(1), t, n, tol)?;
            worst = worst.max((s - (1.0 - (-kappa * t).exp()) / kappa).abs());
        }
        checks.push(Check::new(
            "theorem",
            format!("WF κ={kappa}: first moment (1−e^{{−κt}})/κ"),
            worst,
            1e-10,
        ));
    }

    let wf = wf_family(1.0)?;
    let mut worst: f64 = 0.0;
    for t in [0.1, 1.0, 5.0] {
        let v1 = apply_v0(&wf, &Polynomial::one(), t, n, tol)?;
        worst = worst.max((v1.coeff(0) - t).abs() + v1.coeffs().iter().skip(1).map(|c| c.abs()).sum::<f64>());
    }
    checks.push(Check::new("theorem", "V₀(t)1 = t", worst, 1e-14));

    let g = gaussian_moments(0.0, 0.5, n)?;
    let mut worst: f64 = 0.0;
    for k in 0..=8 {
        for t in [0.1, 1.0, 2.0] {
            let s = semigroup_sensitivity(&ou_family(), &g, &Polynomial::monomial(k), t, n, tol)?;
            worst = worst.max((s - ou_moment_sensitivity_closed_form(k, t)).abs());
        }
    }
    checks.push(Check::new("theorem", "OU moments (1−e^{−t})·n·g_{n−1}", worst, 1e-9));

    let v = integral_propagator(&wf.matrix(&0.0, 2), 1.0, tol)?;
    let lambda: f64 = -4.0;
    checks.push(Check::new(
        "theorem",
        "WF κ=1: x² coefficient of V₀(1)x² = (e^{λ}−1)/λ",
        (v.get(2, 2) - (lambda.exp() - 1.0) / lambda).abs(),
        1e-13,
    ));
    Ok(checks)
}

/// Quasi-eigenbasis identities (exact) and the recursion sensitivity.
pub fn recursion() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for kappa in rationals(&[(1, 2), (1, 1), (2, 1), (7, 3)]) {
        let wf = wf_family(kappa.clone())?;
        let a0 = wf.matrix(&Rational::zero(), 10);
        let nu = derivative_at_zero::<Rational>(10);
        let mut mismatches = 0usize;
        for n in 2..=10 {
            let basis = wf_basis(n, kappa.clone())?;
            for b0 in [Rational::zero(), Rational::one()] {
                let bs = wf_b_sequence(n, kappa.clone(), b0.clone(), 10)?;
                for a in [Rational::zero(), Rational::one()] {
                    let start = &(&basis.xi + &Polynomial::monomial(1).scale(&b0)) + &Polynomial::constant(a.clone());
                    let mut p = start;
                    for k in 1..=10 {
                        p = a0.apply_poly(&p)?;
                        let expected = wf_quasi_eigen_power(n, kappa.clone(), k, b0.clone(), a.clone())?;
                        if p != expected || nu.pair(&p)? != bs.bs[k] {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
        checks.push(Check::new(
            "recursion",
            format!("WF κ={kappa}: A₀ᵏ(ξ_n + b₀x + a) = λ_nᵏξ_n + b_{{n,k}}x, n,k ≤ 10"),
            mismatches as f64,
            0.0,
        ));
    }

    let kappa = Rational::one();
    let wf = wf_family(1.0)?;
    let pi0 = dirac(0.0, 16);
    let config = OracleConfig::default();
    let (mut engine_gap, mut oracle_gap): (f64, f64) = (0.0, 0.0);
    for n in 2..=6 {
        let xi = wf_basis(n, kappa.clone())?.xi.to_f64();
        for t in [0.1, 0.5, 1.0, 1.5, 2.0] {
            let series = wf_xi_sensitivity(n, &kappa, t, None, 1e-12)?.value;
            let engine = semigroup_sensitivity(&wf, &pi0, &xi, t, 16, 1e-12)?;
            let o = central_difference_sensitivity(&wf, &pi0, &xi, t, 16, &config)?;
            engine_gap = engine_gap.max((series - engine).abs());
            oracle_gap = oracle_gap.max((series - o.value).abs());
        }
    }
    checks.push(Check::new(
        "recursion",
        "Σ tᵏ/k! b_{n,k−1} vs ⟨V₀(t)ξ_n|ν⟩, n ≤ 6, t ≤ 2",
        engine_gap,
        1e-8,
    ));
    checks.push(Check::new(
        "recursion",
        "Σ tᵏ/k! b_{n,k−1} vs oracle, n ≤ 6, t ≤ 2",
        oracle_gap,
        1e-6,
    ));
    Ok(checks)
}

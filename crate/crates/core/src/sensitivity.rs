//! The sensitivity functional `ν`, the identities it satisfies, and the
//! semigroup sensitivity `∂/∂θ ⟨ξ | U_θ(t)* π₀⟩|₀ = ⟨V₀(t) ξ | ν⟩`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::duality::{adjoint_apply, MomentFunctional};
use crate::error::{Error, Result};
use crate::operator::GeneratorFamily;
use crate::oracle::{central_difference_sensitivity, OracleConfig};
use crate::polynomial::Polynomial;
use crate::scalar::{max_abs, Scalar};
use crate::semigroup::{propagator, propagator_pair, ExpmDiagnostics};

/// `ν = (A₀′)* π₀` where `A₀′ = ∂A_θ/∂θ|₀`. Exact because θ enters affinely.
pub fn nu_functional<S: Scalar>(
    family: &GeneratorFamily<S>,
    pi0: &MomentFunctional<S>,
    n: usize,
) -> Result<MomentFunctional<S>> {
    let pi0 = pi0.truncate(n)?;
    adjoint_apply(&family.derivative_at_zero().matrix(&S::zero(), n), &pi0)
}

/// `max_{j ≤ n} |⟨A₀ x^j | π₀′⟩ + ⟨x^j | ν⟩|`, zero when `A₀* π₀′ = −ν`.
pub fn stationary_derivative_check<S: Scalar>(
    family: &GeneratorFamily<S>,
    pi0_prime: &MomentFunctional<S>,
    nu: &MomentFunctional<S>,
    n: usize,
) -> Result<S> {
    let lhs = adjoint_apply(&family.matrix(&S::zero(), n), &pi0_prime.truncate(n)?)?;
    let sum = lhs.add(&nu.truncate(n)?)?;
    Ok(max_abs(sum.moments()))
}

/// For each θ, `max_{j ≤ n} |θ⁻¹ ⟨(A_θ − A₀) x^j | π_θ − π₀⟩|`.
pub fn product_condition_check<S: Scalar>(
    family: &GeneratorFamily<S>,
    pi_theta: impl Fn(&S) -> Result<MomentFunctional<S>>,
    pi0: &MomentFunctional<S>,
    thetas: &[S],
    n: usize,
) -> Result<Vec<S>> {
    if thetas.iter().any(|th| !th.is_positive()) || thetas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter {
            name: "thetas",
            value: format!("{thetas:?}"),
            reason: "steps must be positive and strictly decreasing",
        });
    }
    let pi0 = pi0.truncate(n)?;
    let a0 = family.matrix(&S::zero(), n);
    thetas
        .iter()
        .map(|theta| {
            let diff_op = family.matrix(theta, n).sub(&a0)?;
            let diff_mu = pi_theta(theta)?.truncate(n)?.sub(&pi0)?;
            let image = adjoint_apply(&diff_op, &diff_mu)?;
            Ok(max_abs(image.moments()) / theta.clone())
        })
        .collect()
}

/// Checks `A₀* π₀ = 0` up to degree `n`, relative to the size of the moments.
pub fn check_stationary(family: &GeneratorFamily<f64>, pi0: &MomentFunctional<f64>, n: usize, tol: f64) -> Result<()> {
    let pi0 = pi0.truncate(n)?;
    let image = adjoint_apply(&family.matrix(&0.0, n), &pi0)?;
    let residual = max_abs(image.moments());
    let scale = max_abs(pi0.moments()).max(1.0);
    if !(residual <= tol * scale) {
        return Err(Error::NotStationary { residual, tol });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sensitivity {
    pub value: f64,
    pub diagnostics: ExpmDiagnostics,
}

/// `⟨V₀(t) ξ | ν⟩`, the derivative at θ = 0 of `⟨ξ | U_θ(t)* π₀⟩`.
pub fn semigroup_sensitivity(
    family: &GeneratorFamily<f64>,
    pi0: &MomentFunctional<f64>,
    xi: &Polynomial<f64>,
    t: f64,
    n: usize,
    tol: f64,
) -> Result<f64> {
    semigroup_sensitivity_detailed(family, pi0, xi, t, n, tol).map(|s| s.value)
}

pub fn semigroup_sensitivity_detailed(
    family: &GeneratorFamily<f64>,
    pi0: &MomentFunctional<f64>,
    xi: &Polynomial<f64>,
    t: f64,
    n: usize,
    tol: f64,
) -> Result<Sensitivity> {
    check_stationary(family, pi0, n, tol)?;
    let nu = nu_functional(family, pi0, n)?;
    let pair = propagator_pair(&family.matrix(&0.0, n), t, tol)?;
    Ok(Sensitivity {
        value: nu.pair(&pair.v.apply_poly(xi)?)?,
        diagnostics: pair.diagnostics,
    })
}

/// `⟨U₀(t) ξ | π₀⟩ + θ · ⟨V₀(t) ξ | ν⟩`.
pub fn first_order_prediction(
    family: &GeneratorFamily<f64>,
    pi0: &MomentFunctional<f64>,
    xi: &Polynomial<f64>,
    t: f64,
    theta: f64,
    n: usize,
    tol: f64,
) -> Result<f64> {
    let slope = semigroup_sensitivity(family, pi0, xi, t, n, tol)?;
    let u = propagator(&family.matrix(&0.0, n), t, tol)?;
    let base = pi0.truncate(n)?.pair(&u.apply_poly(xi)?)?;
    Ok(base + theta * slope)
}

/// Sensitivities over a grid of test functions and times, optionally compared
/// against the finite-difference oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub xi_labels: Vec<String>,
    /// Coefficients in the monomial basis.
    pub test_functions: Vec<Vec<f64>>,
    pub times: Vec<f64>,
    /// `values[i][k]` belongs to test function `i` at time `k`.
    pub values: Vec<Vec<f64>>,
    pub oracle_values: Option<Vec<Vec<f64>>>,
    pub oracle_error_estimates: Option<Vec<Vec<f64>>>,
    pub oracle_warning: bool,
    pub max_abs_discrepancy: Option<f64>,
    pub degree: usize,
    pub tol: f64,
    pub diagnostics: ExpmDiagnostics,
}

impl SensitivityReport {
    /// Fills the grid, reusing `V₀(t)` and `ν` across test functions.
    pub fn compute(
        family: &GeneratorFamily<f64>,
        pi0: &MomentFunctional<f64>,
        xis: &[(String, Polynomial<f64>)],
        times: &[f64],
        n: usize,
        tol: f64,
        oracle: Option<&OracleConfig>,
    ) -> Result<Self> {
        for (_, xi) in xis {
            if let Some(degree) = xi.degree().filter(|d| *d > n) {
                return Err(Error::DegreeOverflow { degree, truncation: n });
            }
        }
        check_stationary(family, pi0, n, tol)?;
        let nu = nu_functional(family, pi0, n)?;
        let a0 = family.matrix(&0.0, n);

        let mut values = vec![Vec::with_capacity(times.len()); xis.len()];
        let mut diagnostics = ExpmDiagnostics::default();
        for &t in times {
            let pair = propagator_pair(&a0, t, tol)?;
            diagnostics = diagnostics.merge(pair.diagnostics);
            for (row, (_, xi)) in values.iter_mut().zip(xis) {
                row.push(nu.pair(&pair.v.apply_poly(xi)?)?);
            }
        }

        let mut report = SensitivityReport {
            xi_labels: xis.iter().map(|(l, _)| l.clone()).collect(),
            test_functions: xis.iter().map(|(_, p)| p.coeffs().to_vec()).collect(),
            times: times.to_vec(),
            values,
            oracle_values: None,
            oracle_error_estimates: None,
            oracle_warning: false,
            max_abs_discrepancy: None,
            degree: n,
            tol,
            diagnostics,
        };

        if let Some(config) = oracle {
            let mut oracle_values = Vec::with_capacity(xis.len());
            let mut estimates = Vec::with_capacity(xis.len());
            let mut max_diff: f64 = 0.0;
            for (i, (_, xi)) in xis.iter().enumerate() {
                let mut row = Vec::with_capacity(times.len());
                let mut err_row = Vec::with_capacity(times.len());
                for (k, &t) in times.iter().enumerate() {
                    let est = central_difference_sensitivity(family, pi0, xi, t, n, config)?;
                    report.oracle_warning |= est.warning;
                    max_diff = max_diff.max((report.values[i][k] - est.value).abs());
                    row.push(est.value);
                    err_row.push(est.error_estimate);
                }
                oracle_values.push(row);
                estimates.push(err_row);
            }
            report.oracle_values = Some(oracle_values);
            report.oracle_error_estimates = Some(estimates);
            report.max_abs_discrepancy = Some(max_diff);
        }
        Ok(report)
    }

    /// Rows `xi_label,t,value,oracle,abs_diff`; the last two are empty
    /// without an oracle.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["xi_label", "t", "value", "oracle", "abs_diff"])?;
        for (i, label) in self.xi_labels.iter().enumerate() {
            for (k, t) in self.times.iter().enumerate() {
                let value = self.values[i][k];
                let (oracle, diff) = match &self.oracle_values {
                    Some(o) => (float(o[i][k]), float((value - o[i][k]).abs())),
                    None => (String::new(), String::new()),
                };
                w.write_record([label.clone(), float(*t), float(value), oracle, diff])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Shortest representation that parses back to the same `f64`.
fn float(v: f64) -> String {
    format!("{v:?}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{beta_moments, derivative_at_zero, dirac, gaussian_moments, wf_stationary_derivative};
    use crate::models::{ou_family, wf_family};
    use crate::operator::GeneratorTerm;
    use crate::scalar::{ratio, Rational};
    use proptest::prelude::*;

    fn x() -> Polynomial<f64> {
        Polynomial::monomial(1)
    }

    #[test]
    fn nu_examples() {
        let wf = wf_family(ratio(3, 2)).unwrap();
        let nu = nu_functional(&wf, &dirac(Rational::from_i64(0), 10), 10).unwrap();
        assert_eq!(nu, derivative_at_zero(10));

        let g = gaussian_moments(0.0, 0.5, 8).unwrap();
        let nu = nu_functional(&ou_family(), &g, 8).unwrap();
        assert_eq!(nu.moment(0), &0.0);
        assert_eq!(nu.moment(1), &1.0);
        assert_eq!(nu.moment(2), &0.0);
        assert!((nu.moment(3) - 1.5).abs() <= 1e-15);

        let fixed = GeneratorFamily::new(vec![GeneratorTerm::new(Polynomial::monomial(1), 1, 1.0, 0.0).unwrap()]);
        assert!(nu_functional(&fixed, &dirac(0.3, 4), 4).unwrap().is_zero());
    }

    #[test]
    fn stationary_derivative_examples() {
        for kappa in [Rational::from_i64(1), Rational::from_i64(2)] {
            let wf = wf_family(kappa.clone()).unwrap();
            let pi0p = wf_stationary_derivative(kappa.clone(), 1).unwrap();
            let a0x = wf
                .matrix(&Rational::from_i64(0), 1)
                .transpose_mul_vec(pi0p.moments())
                .unwrap();
            assert_eq!(a0x[1], Rational::from_i64(-1));
            let nu = nu_functional(&wf, &dirac(Rational::from_i64(0), 1), 1).unwrap();
            assert_eq!(
                stationary_derivative_check(&wf, &pi0p, &nu, 1).unwrap(),
                Rational::from_i64(0)
            );
        }
        let zero = GeneratorFamily::<f64>::zero();
        let r = stationary_derivative_check(&zero, &MomentFunctional::zero(3), &MomentFunctional::zero(3), 3).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn stationary_derivative_identity_is_exact() {
        for kappa in [ratio(1, 2), ratio(1, 1), ratio(2, 1), ratio(7, 3), ratio(13, 17)] {
            let wf = wf_family(kappa.clone()).unwrap();
            let pi0p = wf_stationary_derivative(kappa, 16).unwrap();
            let nu = nu_functional(&wf, &dirac(Rational::from_i64(0), 16), 16).unwrap();
            assert_eq!(
                stationary_derivative_check(&wf, &pi0p, &nu, 16).unwrap(),
                Rational::from_i64(0)
            );
        }
    }

    #[test]
    fn product_condition_decreases() {
        let kappa = 1.0;
        let wf = wf_family(kappa).unwrap();
        let thetas = [1e-2, 1e-3, 1e-4, 1e-5];
        let seq = product_condition_check(&wf, |th| beta_moments(*th, kappa, 6), &dirac(0.0, 6), &thetas, 6).unwrap();
        assert!(seq.windows(2).all(|w| w[1] < w[0]), "{seq:?}");
        assert!(*seq.last().unwrap() <= 1e-4);

        let j0 = product_condition_check(&wf, |th| beta_moments(*th, kappa, 0), &dirac(0.0, 0), &thetas, 0).unwrap();
        assert!(j0.iter().all(|v| *v == 0.0));

        let fixed = GeneratorFamily::new(vec![GeneratorTerm::new(Polynomial::monomial(1), 1, -1.0, 0.0).unwrap()]);
        let seq =
            product_condition_check(&fixed, |th| beta_moments(*th, kappa, 4), &dirac(0.0, 4), &thetas, 4).unwrap();
        assert!(seq.iter().all(|v| *v == 0.0));

        assert!(
            product_condition_check(&wf, |th| beta_moments(*th, kappa, 4), &dirac(0.0, 4), &[1e-3, 1e-2], 4).is_err()
        );
    }

    #[test]
    fn sensitivity_examples() {
        let wf = wf_family(1.0).unwrap();
        let pi0 = dirac(0.0, 8);
        for t in [0.0, 0.5, 3.0] {
            assert_eq!(
                semigroup_sensitivity(&wf, &pi0, &Polynomial::one(), t, 8, 1e-12).unwrap(),
                0.0
            );
        }
        for t in [0.1, 1.0, 2.0] {
            let s = semigroup_sensitivity(&wf, &pi0, &x(), t, 8, 1e-12).unwrap();
            assert!((s - (1.0 - (-t).exp())).abs() <= 1e-12);
        }
        let g = gaussian_moments(0.0, 0.5, 8).unwrap();
        let s = semigroup_sensitivity(&ou_family(), &g, &x(), 1.0, 8, 1e-12).unwrap();
        assert!((s - (1.0 - (-1.0f64).exp())).abs() <= 1e-12);
    }

    #[test]
    fn stationarity_is_checked() {
        let wf = wf_family(1.0).unwrap();
        let err = semigroup_sensitivity(&wf, &dirac(0.5, 6), &x(), 1.0, 6, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NotStationary { .. }));
    }

    #[test]
    fn first_order_prediction_examples() {
        let wf = wf_family(1.0).unwrap();
        let pi0 = dirac(0.0, 6);
        assert_eq!(
            first_order_prediction(&wf, &pi0, &x(), 1.0, 0.0, 6, 1e-12).unwrap(),
            0.0
        );
        for theta in [0.0, 0.2, 1.0] {
            let p = first_order_prediction(&wf, &pi0, &Polynomial::one(), 2.0, theta, 6, 1e-12).unwrap();
            assert!((p - 1.0).abs() <= 1e-12);
        }
        let p = first_order_prediction(&wf, &pi0, &x(), 1.0, 0.01, 6, 1e-12).unwrap();
        assert!((p - 0.01 * (1.0 - (-1.0f64).exp())).abs() <= 1e-14);
    }

    #[test]
    fn report_grid_and_csv() {
        let wf = wf_family(1.0).unwrap();
        let xis = vec![("1".to_string(), Polynomial::one()), ("x".to_string(), x())];
        let r = SensitivityReport::compute(
            &wf,
            &dirac(0.0, 4),
            &xis,
            &[0.0, 1.0],
            4,
            1e-12,
            Some(&OracleConfig::default()),
        )
        .unwrap();
        assert_eq!(r.values.len(), 2);
        assert_eq!(r.values[1].len(), 2);
        assert!(r.max_abs_discrepancy.unwrap() <= 1e-8);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "xi_label,t,value,oracle,abs_diff");
        assert_eq!(text.lines().count(), 5);
        let back = SensitivityReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }

    proptest! {
        #[test]
        fn sensitivity_is_linear(
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
            p in proptest::collection::vec(-2.0f64..2.0, 1..6),
            q in proptest::collection::vec(-2.0f64..2.0, 1..6),
            t in 0.0f64..2.0,
        ) {
            let wf = wf_family(0.5).unwrap();
            let pi0 = dirac(0.0, 6);
            let p = Polynomial::from_coeffs(p);
            let q = Polynomial::from_coeffs(q);
            let combo = &p.scale(&a) + &q.scale(&b);
            let s = |xi: &Polynomial<f64>| semigroup_sensitivity(&wf, &pi0, xi, t, 6, 1e-12).unwrap();
            let lhs = s(&combo);
            let rhs = a * s(&p) + b * s(&q);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }
}

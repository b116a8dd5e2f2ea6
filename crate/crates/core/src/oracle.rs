//! Finite-difference oracle for semigroup sensitivities.
//!
//! Evolves `π₀` under the perturbed semigroup, `f(θ) = ⟨U_θ(t)ξ | π₀⟩`, and
//! differentiates numerically at θ = 0 with central differences and
//! Richardson extrapolation. Nothing here touches the sensitivity formula in
//! [`crate::sensitivity`]; the two share only the polynomial, operator,
//! functional and exponential layers.
//!
//! Central differences evaluate the family at negative θ. The families are
//! affine in θ, so `A_{−θ}` is a well-defined matrix even where it is not a
//! generator of a probability model (Wright–Fisher with θ < 0).

use crate::duality::{adjoint_apply, MomentFunctional};
use crate::error::{Error, Result};
use crate::operator::GeneratorFamily;
use crate::polynomial::Polynomial;
use crate::scalar::{max_abs, Scalar};
use crate::semigroup::{propagator, DEFAULT_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    /// Strictly decreasing positive steps.
    pub thetas: Vec<f64>,
    pub richardson_levels: usize,
    /// Discrepancy above which a comparison is reported as failing.
    pub tol_report: f64,
    /// Tolerance handed to the exponential.
    pub engine_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            thetas: vec![1e-2, 1e-3, 1e-4],
            richardson_levels: 1,
            tol_report: 1e-6,
            engine_tol: DEFAULT_TOL,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thetas.is_empty() || self.thetas.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "thetas",
                value: format!("{:?}", self.thetas),
                reason: "steps must be positive and finite",
            });
        }
        if self.thetas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidParameter {
                name: "thetas",
                value: format!("{:?}", self.thetas),
                reason: "steps must be strictly decreasing",
            });
        }
        if self.richardson_levels >= self.thetas.len() {
            return Err(Error::InvalidParameter {
                name: "richardson_levels",
                value: self.richardson_levels.to_string(),
                reason: "needs more steps than extrapolation levels",
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleEstimate {
    /// Finest extrapolated value.
    pub value: f64,
    /// Difference between the two finest entries of the last tableau column.
    pub error_estimate: f64,
    /// Set when successive differences in a tableau column fail to shrink.
    pub warning: bool,
    /// Plain central differences, one per step.
    pub central_differences: Vec<f64>,
}

/// `⟨U_θ(t) ξ | π₀⟩`, i.e. `⟨ξ | U_θ(t)* π₀⟩`.
pub fn evolved_pairing(
    family: &GeneratorFamily<f64>,
    pi0: &MomentFunctional<f64>,
    xi: &Polynomial<f64>,
    theta: f64,
    t: f64,
    n: usize,
    tol: f64,
) -> Result<f64> {
    let pi0 = pi0.truncate(n)?;
    let u = propagator(&family.matrix(&theta, n), t, tol)?;
    pi0.pair(&u.apply_poly(xi)?)
}

/// Richardson-extrapolated central difference of `θ ↦ ⟨U_θ(t)ξ | π₀⟩` at 0.
pub fn central_difference_sensitivity(
    family: &GeneratorFamily<f64>,
    pi0: &MomentFunctional<f64>,
    xi: &Polynomial<f64>,
    t: f64,
    n: usize,
    config: &OracleConfig,
) -> Result<OracleEstimate> {
    config.validate()?;
    let f = |theta: f64| evolved_pairing(family, pi0, xi, theta, t, n, config.engine_tol);
    let central_differences = config
        .thetas
        .iter()
        .map(|&h| Ok((f(h)? - f(-h)?) / (2.0 * h)))
        .collect::<Result<Vec<_>>>()?;
    Ok(richardson(
        &config.thetas,
        &central_differences,
        config.richardson_levels,
    ))
}

/// Neville tableau for an error expansion in even powers of the step:
/// `T[i][l] = T[i][l−1] + (T[i][l−1] − T[i−1][l−1]) / ((h_{i−l}/h_i)² − 1)`.
pub fn richardson(steps: &[f64], values: &[f64], levels: usize) -> OracleEstimate {
    let rows = values.len();
    let mut table: Vec<Vec<f64>> = values.iter().map(|v| vec![*v]).collect();
    for l in 1..=levels {
        for i in l..rows {
            let ratio = steps[i - l] / steps[i];
            let prev = table[i][l - 1];
            let diff = prev - table[i - 1][l - 1];
            table[i].push(prev + diff / (ratio * ratio - 1.0));
        }
    }
    let column = |l: usize| -> Vec<f64> { (l..rows).map(|i| table[i][l]).collect() };

    let mut warning = false;
    for l in 0..=levels {
        let col = column(l);
        let diffs: Vec<f64> = col.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        if diffs.windows(2).any(|d| d[1] >= d[0] && d[1] > 0.0) {
            warning = true;
        }
    }

    let last = column(levels);
    let value = *last.last().expect("at least one step");
    let error_estimate = if last.len() >= 2 {
        (last[last.len() - 1] - last[last.len() - 2]).abs()
    } else if levels > 0 {
        (value - table[rows - 1][levels - 1]).abs()
    } else {
        f64::NAN
    };
    OracleEstimate {
        value,
        error_estimate,
        warning,
        central_differences: values.to_vec(),
    }
}

/// `max_{j ≤ n} |⟨A_θ x^j | μ⟩|`, zero exactly when `μ` is stationary for `A_θ`
/// up to degree `n`.
pub fn stationarity_residual<S: Scalar>(
    family: &GeneratorFamily<S>,
    theta: &S,
    mu: &MomentFunctional<S>,
    n: usize,
) -> Result<S> {
    let mu = mu.truncate(n)?;
    let image = adjoint_apply(&family.matrix(theta, n), &mu)?;
    Ok(max_abs(image.moments()))
}

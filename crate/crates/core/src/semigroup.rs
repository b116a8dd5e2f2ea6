//! `U(t) = e^{tM}` and `V(t) = Σ_{n≥1} tⁿ/n! M^{n−1} = ∫₀ᵗ e^{sM} ds` for a
//! truncated operator matrix.
//!
//! The exponential is computed by scaling and squaring over a truncated
//! Taylor series. `V(t)` is read off the exponential of the augmented block
//! matrix `[[M, I], [0, 0]]`, whose upper-right block is exactly `V(t)` and
//! whose upper-left block is `U(t)`. Only `f64` matrices are accepted:
//! `e^{tM}` is transcendental, so exact propagation is not offered.
//!
//! Summation order is fixed, so results are bitwise reproducible.

use crate::error::{Error, Result};
use crate::operator::{GeneratorFamily, OperatorMatrix};
use crate::polynomial::Polynomial;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_SERIES_TERMS: usize = 200;
pub const MAX_SQUARINGS: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpmOptions {
    pub tol: f64,
    pub max_terms: usize,
    pub max_squarings: u32,
}

impl Default for ExpmOptions {
    fn default() -> Self {
        ExpmOptions {
            tol: DEFAULT_TOL,
            max_terms: MAX_SERIES_TERMS,
            max_squarings: MAX_SQUARINGS,
        }
    }
}

impl ExpmOptions {
    pub fn with_tol(tol: f64) -> Self {
        ExpmOptions { tol, ..Self::default() }
    }
}

/// Work done by one exponential.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ExpmDiagnostics {
    pub terms: usize,
    pub squarings: u32,
}

impl ExpmDiagnostics {
    pub fn merge(self, other: Self) -> Self {
        ExpmDiagnostics {
            terms: self.terms.max(other.terms),
            squarings: self.squarings.max(other.squarings),
        }
    }
}

/// `U(t)` and `V(t)` computed together.
#[derive(Clone, Debug)]
pub struct PropagatorPair {
    pub u: OperatorMatrix<f64>,
    pub v: OperatorMatrix<f64>,
    pub t: f64,
    pub tol: f64,
    pub diagnostics: ExpmDiagnostics,
}

/// `e^{tM}` with relative max-norm error about `tol`.
pub fn propagator(m: &OperatorMatrix<f64>, t: f64, tol: f64) -> Result<OperatorMatrix<f64>> {
    propagator_with(m, t, &ExpmOptions::with_tol(tol)).map(|(u, _)| u)
}

pub fn propagator_with(
    m: &OperatorMatrix<f64>,
    t: f64,
    opts: &ExpmOptions,
) -> Result<(OperatorMatrix<f64>, ExpmDiagnostics)> {
    check_inputs(m, t, opts)?;
    expm(&m.scale(&t), opts)
}

/// `V(t) = ∫₀ᵗ e^{sM} ds`, from the augmented block exponential.
pub fn integral_propagator(m: &OperatorMatrix<f64>, t: f64, tol: f64) -> Result<OperatorMatrix<f64>> {
    propagator_pair_with(m, t, &ExpmOptions::with_tol(tol)).map(|p| p.v)
}

pub fn propagator_pair(m: &OperatorMatrix<f64>, t: f64, tol: f64) -> Result<PropagatorPair> {
    propagator_pair_with(m, t, &ExpmOptions::with_tol(tol))
}

pub fn propagator_pair_with(m: &OperatorMatrix<f64>, t: f64, opts: &ExpmOptions) -> Result<PropagatorPair> {
    check_inputs(m, t, opts)?;
    let n = m.dim();
    // t·[[M, I], [0, 0]]
    let mut aug = OperatorMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j) * t);
        }
        aug.set(i, n + i, t);
    }
    let (e, diagnostics) = expm(&aug, opts)?;
    Ok(PropagatorPair {
        u: e.block(0, 0, n),
        v: e.block(0, n, n),
        t,
        tol: opts.tol,
        diagnostics,
    })
}

/// Plain Taylor series `Σ (tM)^k/k!` without scaling. Only reliable for small
/// `‖tM‖`; kept for cross-checking.
pub fn propagator_series(m: &OperatorMatrix<f64>, t: f64, opts: &ExpmOptions) -> Result<OperatorMatrix<f64>> {
    check_inputs(m, t, opts)?;
    taylor(&m.scale(&t), opts.tol, opts.max_terms).map(|(u, _)| u)
}

/// Direct series `Σ_{n≥1} tⁿ/n! M^{n−1}`. Only reliable for small `‖tM‖`.
pub fn integral_propagator_series(m: &OperatorMatrix<f64>, t: f64, opts: &ExpmOptions) -> Result<OperatorMatrix<f64>> {
    check_inputs(m, t, opts)?;
    let dim = m.dim();
    // term_n = tⁿ/n! M^{n−1}
    let mut term = OperatorMatrix::identity(dim).scale(&t);
    let mut sum = term.clone();
    for n in 2..=opts.max_terms {
        term = term.matmul(m)?.scale(&(t / n as f64));
        sum = sum.add(&term)?;
        if term.norm_inf() <= opts.tol * sum.norm_inf() {
            return finite(sum, "direct V(t) series");
        }
    }
    if t == 0.0 || m.max_abs() == 0.0 {
        return Ok(sum);
    }
    Err(Error::SeriesNotConverged {
        max_terms: opts.max_terms,
    })
}

/// Composite Simpson rule for `∫₀ᵗ e^{sM} ds` on `intervals + 1` equally
/// spaced nodes; `intervals` must be even and positive.
pub fn integral_propagator_simpson(
    m: &OperatorMatrix<f64>,
    t: f64,
    intervals: usize,
    tol: f64,
) -> Result<OperatorMatrix<f64>> {
    if intervals == 0 || !intervals.is_multiple_of(2) {
        return Err(Error::InvalidParameter {
            name: "intervals",
            value: intervals.to_string(),
            reason: "Simpson's rule needs a positive even number of intervals",
        });
    }
    let h = t / intervals as f64;
    let mut sum = OperatorMatrix::zeros(m.dim());
    for k in 0..=intervals {
        let weight = if k == 0 || k == intervals {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let node = propagator(m, k as f64 * h, tol)?;
        sum = sum.add(&node.scale(&weight))?;
    }
    finite(sum.scale(&(h / 3.0)), "Simpson quadrature")
}

/// Coefficients of `V₀(t) ξ` with `V₀` built from `A₀` truncated at degree `n`.
pub fn apply_v0(
    family: &GeneratorFamily<f64>,
    xi: &Polynomial<f64>,
    t: f64,
    n: usize,
    tol: f64,
) -> Result<Polynomial<f64>> {
    let v = integral_propagator(&family.matrix(&0.0, n), t, tol)?;
    v.apply_poly(xi)
}

fn check_inputs(m: &OperatorMatrix<f64>, t: f64, opts: &ExpmOptions) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t.to_string(),
            reason: "time must be finite and nonnegative",
        });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: opts.tol.to_string(),
            reason: "tolerance must be positive",
        });
    }
    if m.entries().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "operator matrix",
        });
    }
    Ok(())
}

/// Scaling and squaring: pick `s` with `‖A‖/2^s ≤ 1/2`, sum the Taylor series
/// of `A/2^s`, square `s` times. The series stops once the term norm drops
/// below `tol·2^{−s}` of the partial sum, so the amplification by the
/// squarings keeps the truncation error near `tol`.
fn expm(a: &OperatorMatrix<f64>, opts: &ExpmOptions) -> Result<(OperatorMatrix<f64>, ExpmDiagnostics)> {
    let norm = a.norm_inf();
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > 0.5 {
        scaled_norm /= 2.0;
        squarings += 1;
    }
    if squarings > opts.max_squarings {
        return Err(Error::ScalingLimit {
            required: squarings,
            max: opts.max_squarings,
        });
    }
    let scale = 0.5f64.powi(squarings as i32);
    let (mut e, terms) = taylor(&a.scale(&scale), opts.tol * scale, opts.max_terms)?;
    for _ in 0..squarings {
        e = e.matmul(&e)?;
    }
    let e = finite(e, "matrix exponential")?;
    Ok((e, ExpmDiagnostics { terms, squarings }))
}

fn taylor(a: &OperatorMatrix<f64>, rel_tol: f64, max_terms: usize) -> Result<(OperatorMatrix<f64>, usize)> {
    let dim = a.dim();
    let mut term = OperatorMatrix::identity(dim);
    let mut sum = term.clone();
    if a.max_abs() == 0.0 {
        return Ok((sum, 0));
    }
    for k in 1..=max_terms {
        term = term.matmul(a)?.scale(&(1.0 / k as f64));
        sum = sum.add(&term)?;
        if term.norm_inf() <= rel_tol * sum.norm_inf() {
            return Ok((finite(sum, "Taylor series")?, k));
        }
    }
    Err(Error::SeriesNotConverged { max_terms })
}

fn finite(m: OperatorMatrix<f64>, context: &'static str) -> Result<OperatorMatrix<f64>> {
    if m.entries().iter().all(|v| v.is_finite()) {
        Ok(m)
    } else {
        Err(Error::NonFinite { context })
    }
}

/// Relative max-norm distance `‖a − b‖_max / max(‖b‖_max, 1)`.
pub fn relative_distance(a: &OperatorMatrix<f64>, b: &OperatorMatrix<f64>) -> Result<f64> {
    let diff = a.sub(b)?.max_abs();
    Ok(diff / b.max_abs().max(1.0))
}

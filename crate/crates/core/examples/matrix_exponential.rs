//! U(t) = e^{tA₀} and V(t) = ∫₀ᵗ e^{sA₀} ds for the Wright–Fisher generator,
//! with the identity A₀V(t) = U(t) − I and a Simpson cross-check.

use std::error::Error;

use semisens::models::wf_family;
use semisens::semigroup::{
    integral_propagator_series, integral_propagator_simpson, propagator_pair, relative_distance, ExpmOptions,
};
use semisens::OperatorMatrix;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a0 = wf_family(1.0)?.matrix(&0.0, 16);
    let t = 1.0;
    let pair = propagator_pair(&a0, t, 1e-12)?;
    println!(
        "degree 16, t = {t}: {} Taylor terms, {} squarings",
        pair.diagnostics.terms, pair.diagnostics.squarings
    );
    println!("V(t)·1 = {}", pair.v.get(0, 0));
    println!(
        "V(t)x, x coefficient = {} (expected {})",
        pair.v.get(1, 1),
        1.0 - (-t).exp()
    );

    let lhs = a0.matmul(&pair.v)?;
    let rhs = pair.u.sub(&OperatorMatrix::identity(a0.dim()))?;
    println!("relative ‖A₀V − (U − I)‖ = {:e}", relative_distance(&lhs, &rhs)?);

    let small = wf_family(1.0)?.matrix(&0.0, 2);
    let block = propagator_pair(&small, 0.25, 1e-12)?.v;
    let simpson = integral_propagator_simpson(&small, 0.25, 128, 1e-12)?;
    let series = integral_propagator_series(&small, 0.25, &ExpmOptions::default())?;
    println!(
        "degree 2, t = 0.25: Simpson gap {:e}, direct series gap {:e}",
        relative_distance(&simpson, &block)?,
        relative_distance(&series, &block)?
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

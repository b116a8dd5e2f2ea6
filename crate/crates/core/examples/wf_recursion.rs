//! The Wright–Fisher quasi-eigenbasis ξ_n, the sequence b_{n,k}, and the
//! series Σ tᵏ/k! b_{n,k−1} for the sensitivity of ⟨ξ_n|·⟩.

use std::error::Error;

use semisens::duality::dirac;
use semisens::models::{wf_b_sequence, wf_basis, wf_family, wf_quasi_eigen_power, wf_xi_sensitivity};
use semisens::sensitivity::semigroup_sensitivity;
use semisens::{Rational, Scalar};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let kappa = Rational::from_i64(1);
    let zero = Rational::from_i64(0);
    for n in 2..=4 {
        let basis = wf_basis(n, kappa.clone())?;
        let bs = wf_b_sequence(n, kappa.clone(), zero.clone(), 4)?;
        println!("n = {n}: λ = {}, ξ_n = {}", basis.lambda, basis.xi);
        println!(
            "  b_{{n,0..4}} = {:?}",
            bs.bs.iter().map(|b| b.to_string()).collect::<Vec<_>>()
        );
        println!(
            "  A₀²ξ_n = {}",
            wf_quasi_eigen_power(n, kappa.clone(), 2, zero.clone(), zero.clone())?
        );
    }

    let wf = wf_family(1.0)?;
    let pi0 = dirac(0.0, 6);
    for n in 2..=6 {
        let xi = wf_basis(n, kappa.clone())?.xi.to_f64();
        let series = wf_xi_sensitivity(n, &kappa, 2.0, None, 1e-12)?;
        let engine = semigroup_sensitivity(&wf, &pi0, &xi, 2.0, 6, 1e-12)?;
        println!(
            "n = {n}, t = 2: series {:.15e} ({} terms, tail ≤ {:.1e}), engine {engine:.15e}",
            series.value, series.kmax, series.tail_bound
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

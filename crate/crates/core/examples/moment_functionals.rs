//! Moment functionals: Beta stationary laws, their θ-derivative at 0, and the
//! pairing with polynomials, in exact arithmetic.

use std::error::Error;

use semisens::duality::{beta_moments, dirac, wf_stationary_derivative};
use semisens::models::wf_family;
use semisens::oracle::stationarity_residual;
use semisens::scalar::ratio;
use semisens::sensitivity::{nu_functional, stationary_derivative_check};
use semisens::{Polynomial, Rational, Scalar};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (theta, kappa) = (ratio(1, 1), ratio(1, 1));
    let beta = beta_moments(theta.clone(), kappa.clone(), 6)?;
    println!(
        "Beta(1,1) moments: {:?}",
        beta.moments().iter().map(|m| m.to_string()).collect::<Vec<_>>()
    );
    println!("⟨x²|Beta(1,1)⟩ = {}", beta.pair(&Polynomial::monomial(2))?);

    let wf = wf_family(kappa.clone())?;
    println!(
        "stationarity residual of Beta(1,1): {}",
        stationarity_residual(&wf, &theta, &beta, 6)?
    );

    let nu = nu_functional(&wf, &dirac(Rational::from_i64(0), 6), 6)?;
    let pi0_prime = wf_stationary_derivative(ratio(7, 3), 6)?;
    println!(
        "ν moments (derivative at 0): {:?}",
        nu.moments().iter().map(|m| m.to_string()).collect::<Vec<_>>()
    );
    let wf73 = wf_family(ratio(7, 3))?;
    let residual = stationary_derivative_check(&wf73, &pi0_prime, &nu, 6)?;
    println!("κ = 7/3: max |A₀*π₀′ + ν| = {residual}");
    assert_eq!(residual, Rational::from_i64(0));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

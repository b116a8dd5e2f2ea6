//! Ornstein–Uhlenbeck sensitivities from the stationary law N(0, 1/2),
//! compared with the closed form (1 − e^{−t})·n·g_{n−1}.

use std::error::Error;

use semisens::duality::gaussian_moments;
use semisens::models::{ou_family, ou_moment_sensitivity_closed_form};
use semisens::sensitivity::{nu_functional, semigroup_sensitivity};
use semisens::Polynomial;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 12;
    let ou = ou_family();
    let pi0 = gaussian_moments(0.0, 0.5, n)?;
    let nu = nu_functional(&ou, &pi0, n)?;
    println!("ν(x^k), k = 0..5: {:?}", &nu.moments()[..6]);

    println!("{:>3} {:>5} {:>22} {:>22}", "k", "t", "engine", "closed form");
    for k in 0..=8 {
        for t in [0.1, 1.0, 2.0] {
            let s = semigroup_sensitivity(&ou, &pi0, &Polynomial::monomial(k), t, n, 1e-12)?;
            println!(
                "{k:>3} {t:>5} {s:>22.15e} {:>22.15e}",
                ou_moment_sensitivity_closed_form(k, t)
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

//! Sensitivity of Wright–Fisher moments to the back-mutation rate θ at θ = 0,
//! starting from δ₀, compared with the finite-difference oracle and the
//! first-order prediction.

use std::error::Error;

use semisens::duality::dirac;
use semisens::models::wf_family;
use semisens::oracle::{evolved_pairing, OracleConfig};
use semisens::sensitivity::first_order_prediction;
use semisens::{Polynomial, SensitivityReport};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let kappa = 1.0;
    let n = 12;
    let wf = wf_family(kappa)?;
    let pi0 = dirac(0.0, n);
    let xis: Vec<(String, Polynomial<f64>)> = (0..=3).map(|k| (format!("x^{k}"), Polynomial::monomial(k))).collect();
    let times = [0.1, 0.5, 1.0, 2.0];

    let report = SensitivityReport::compute(&wf, &pi0, &xis, &times, n, 1e-12, Some(&OracleConfig::default()))?;
    report.write_csv(std::io::stdout())?;
    println!(
        "max |sensitivity − oracle| = {:e}",
        report.max_abs_discrepancy.unwrap_or(f64::NAN)
    );

    let theta = 0.01;
    let x = Polynomial::monomial(1);
    let predicted = first_order_prediction(&wf, &pi0, &x, 1.0, theta, n, 1e-12)?;
    let actual = evolved_pairing(&wf, &pi0, &x, theta, 1.0, n, 1e-12)?;
    println!("θ = {theta}, t = 1: first moment {actual:.10}, first-order prediction {predicted:.10}");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

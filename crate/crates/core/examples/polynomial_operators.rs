//! Builds the Wright–Fisher generator, applies it to monomials and prints its
//! upper-triangular matrix on (1, x, x², x³).

use std::error::Error;

use semisens::models::wf_family;
use semisens::scalar::ratio;
use semisens::{Polynomial, Rational, Scalar};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let kappa = ratio(1, 1);
    let wf = wf_family(kappa)?;
    let zero = Rational::from_i64(0);

    for k in 0..=3 {
        let image = wf.apply(&zero, &Polynomial::monomial(k));
        println!("A₀ x^{k} = {image}");
    }

    let m = wf.matrix(&zero, 3);
    println!("\nmatrix of A₀ (column j = A₀ x^j):");
    for i in 0..=3 {
        let row: Vec<String> = (0..=3).map(|j| format!("{:>4}", m.get(i, j))).collect();
        println!("  {}", row.join(" "));
    }
    assert!(m.is_upper_triangular());

    let derivative = wf.derivative_at_zero();
    println!(
        "\n∂A_θ/∂θ applied to x³: {}",
        derivative.apply(&zero, &Polynomial::monomial(3))
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

//! A user-defined family loaded from JSON: an Ornstein–Uhlenbeck process
//! centred at 1/2 + θ, started from its stationary law N(1/2, 1/2).

use std::error::Error;

use semisens::cli::load_custom;
use semisens::oracle::{central_difference_sensitivity, OracleConfig};
use semisens::sensitivity::semigroup_sensitivity;
use semisens::Polynomial;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/ou_shifted.json");
    let (family, pi0) = load_custom(&std::fs::read_to_string(path)?)?;
    let n = 8;
    let pi0 = pi0.ok_or("document has no pi0")?.truncate(n)?;
    for (k, t) in [(1, 1.0), (2, 1.0), (3, 0.5)] {
        let xi = Polynomial::monomial(k);
        let s = semigroup_sensitivity(&family, &pi0, &xi, t, n, 1e-12)?;
        let o = central_difference_sensitivity(&family, &pi0, &xi, t, n, &OracleConfig::default())?;
        println!("x^{k}, t = {t}: sensitivity {s:.12}, oracle {:.12}", o.value);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

//! Published closed forms checked against the oracle; prints one line per
//! entry followed by the machine-readable report.

use std::error::Error;

use semisens::errata::{errata, to_json};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let entries = errata()?;
    for e in &entries {
        let published = e
            .published_value
            .map_or("not finite".to_string(), |v| format!("{v:.6}"));
        println!(
            "{:<32} published {published:>12}  implemented {:>12.6}  oracle {:>12.6}  confirmed {}",
            e.id, e.implemented_value, e.oracle_value, e.confirmed
        );
    }
    println!("{}", to_json(&entries)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

//! Classifies gamma-law pressures by the stability discriminant
//! D(v) = 3 p''^2 - 2 p' p''' and locates the interval where it is positive.
//!
//! Run with: cargo run --example stability_scan

use ptrack::gamma_law;

fn main() -> ptrack::Result<()> {
    println!("{:>6}  {:>12}  {}", "gamma", "D(1)", "violation interval on (0.5, 2)");
    for gamma in [0.5, 0.8, 1.0, 1.2, 1.5, 2.0, 3.0] {
        let law = gamma_law(gamma)?;
        let d1 = law.bakhvalov_discriminant(1.0)?;
        match law.find_violation_interval((0.5, 2.0))? {
            Some((lo, hi)) => println!("{gamma:>6}  {d1:>12.4e}  ({lo:.6}, {hi:.6})"),
            None => println!("{gamma:>6}  {d1:>12.4e}  condition holds everywhere"),
        }
    }
    println!();
    println!("strength amplification across head-on shock crossings needs D > 0,");
    println!("so only laws steeper than the isothermal one (gamma > 1) support it.");
    Ok(())
}

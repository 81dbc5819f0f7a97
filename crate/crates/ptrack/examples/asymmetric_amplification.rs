//! Measures the per-cycle amplification of a tracked small front riding in
//! the asymmetric pattern, across a halving sequence of inner strengths:
//! the factor follows 1 + const * s^3 with a positive constant.
//!
//! Run with: cargo run --release --example asymmetric_amplification

use ptrack::curves::j2_value;
use ptrack::pattern::{self, PatternSpec};
use ptrack::{gamma_law, J2Convention};

fn main() -> ptrack::Result<()> {
    let law = gamma_law(3.0)?;
    let j2i = j2_value(&law, 1.0, J2Convention::Interaction)?;
    println!("design target: kappa = 1 + (X/2) s^3 with X/2 = {:.6}", 0.5 * j2i);
    println!();
    println!("{:>7} {:>9} {:>16} {:>12}", "s", "tilt", "kappa", "(kappa-1)/s^3");
    for s in [0.1, 0.05, 0.025] {
        let mut spec = PatternSpec::asymmetric(law.clone(), 1.0, s);
        spec.probe = true;
        spec.eps = 1e-5;
        let (_, lambda) = pattern::search_tilt(&spec)?;
        let mut run = pattern::PatternRun::build(&spec, lambda)?;
        run.run_cycles(16)?;
        let factors = pattern::probe_reflection_factors(&run.probe_log, 11);
        let kappa = (factors.iter().map(|x| x.ln()).sum::<f64>() / factors.len() as f64).exp();
        println!(
            "{s:>7} {lambda:>9.4} {kappa:>16.12} {:>12.6}",
            (kappa - 1.0) / s.powi(3)
        );
    }
    println!();
    println!("the same probe in the symmetric pattern is neutral:");
    for s in [0.1, 0.05] {
        let mut spec = PatternSpec::symmetric(law.clone(), 1.0, s);
        spec.probe = true;
        spec.eps = 1e-5;
        let mut run = pattern::PatternRun::build(&spec, 1.0)?;
        run.run_cycles(10)?;
        let factors = pattern::probe_reflection_factors(&run.probe_log, 2);
        let kappa = (factors.iter().map(|x| x.ln()).sum::<f64>() / factors.len() as f64).exp();
        println!("  s = {s}: kappa - 1 = {:+.3e}", kappa - 1.0);
    }
    Ok(())
}

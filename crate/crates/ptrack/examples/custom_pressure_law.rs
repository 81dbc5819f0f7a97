//! Pressure laws beyond the gamma family: a cubic-spline table law and a
//! closed-form custom law, both run through the same analysis.
//!
//! Run with: cargo run --example custom_pressure_law

use ptrack::pressure::{custom_law, table_law, PDerivs};
use ptrack::riemann::solve;
use ptrack::State;

fn main() -> ptrack::Result<()> {
    // table law: spline through samples of p = v^-2.3
    let knots: Vec<(f64, f64)> = (0..80)
        .map(|i| {
            let v = 0.5 + 1.8 * i as f64 / 79.0;
            (v, v.powf(-2.3))
        })
        .collect();
    let law = table_law(&knots)?;
    println!("{}: domain {:?}", law.label(), law.domain());
    match law.find_violation_interval((0.6, 2.0))? {
        Some((lo, hi)) => println!("  stability condition violated on ({lo:.4}, {hi:.4})"),
        None => println!("  stability condition holds"),
    }
    let left = State::new(&law, 0.1, 0.9)?;
    let right = State::new(&law, -0.1, 1.3)?;
    let sol = solve(&law, &left, &right)?;
    println!(
        "  Riemann middle state: u = {:+.6}, v = {:.6} ({}{} + {}{})",
        sol.middle.u, sol.middle.v, sol.wave1.kind, sol.wave1.family, sol.wave2.kind, sol.wave2.family
    );

    // closed-form custom law with all four derivatives supplied
    let law = custom_law("stiffened: p = 2 v^-2 + 0.5 v^-1", (0.05, 50.0), |v| {
        PDerivs {
            p: 2.0 / (v * v) + 0.5 / v,
            p1: -4.0 / (v * v * v) - 0.5 / (v * v),
            p2: 12.0 / (v * v * v * v) + 1.0 / (v * v * v),
            p3: -48.0 / v.powi(5) - 3.0 / (v * v * v * v),
            p4: 240.0 / v.powi(6) + 12.0 / v.powi(5),
        }
    })?;
    law.validate_convexity(256)?;
    println!("{}:", law.label());
    println!("  c(1) = {:.6}, h(0.7) = {:.6}", law.wave_speed(1.0)?, law.h_of_v(0.7)?);
    println!("  round trip v_of_h(h_of_v(0.7)) = {:.12}", law.v_of_h(law.h_of_v(0.7)?)?);
    match law.find_violation_interval((0.3, 3.0))? {
        Some((lo, hi)) => println!("  stability condition violated on ({lo:.4}, {hi:.4})"),
        None => println!("  stability condition holds"),
    }
    Ok(())
}

//! Solves a single Riemann problem exactly and prints the outgoing waves.
//!
//! Run with: cargo run --example riemann_problem

use ptrack::riemann::solve;
use ptrack::{gamma_law, State};

fn main() -> ptrack::Result<()> {
    let law = gamma_law(3.0)?;
    let left = State::new(&law, 0.3, 0.8)?;
    let right = State::new(&law, -0.2, 1.5)?;

    let sol = solve(&law, &left, &right)?;
    println!("left   : u = {:+.6}, v = {:.6}, h = {:+.6}", left.u, left.v, left.h);
    println!("right  : u = {:+.6}, v = {:.6}, h = {:+.6}", right.u, right.v, right.h);
    println!(
        "middle : u = {:+.6}, v = {:.6}, h = {:+.6}",
        sol.middle.u, sol.middle.v, sol.middle.h
    );
    for (name, w) in [("wave 1", &sol.wave1), ("wave 2", &sol.wave2)] {
        println!(
            "{name} : {}{}  strength = {:.6e}  speed = {:?}",
            w.kind,
            w.family,
            w.strength(),
            w.speed
        );
    }

    // the signed strengths a = h_left - h_right telescope exactly
    let a_in = left.h - right.h;
    let a_out = (left.h - sol.middle.h) + (sol.middle.h - right.h);
    println!("strength bookkeeping: sum of a in = {a_in:.12}, out = {a_out:.12}");
    Ok(())
}

//! The ancilla-assisted X-string identity behind the gate compiler: an
//! MS(pi/2) sandwich around one single-qubit ancilla rotation equals
//! exp(i phi X^n) on the ancilla-|0> subspace, with the rotation axis and
//! sign cycling with n mod 4.
//!
//! Run with `cargo run --example ms_identity`.

use std::f64::consts::FRAC_PI_2;

use hasten::msgates::{self, anc_rule};

fn main() -> hasten::Result<()> {
    println!("n mod 4 -> ancilla rotation:");
    for n in 1..=4 {
        let (axis, sign) = anc_rule(n);
        println!(
            "  n = {n}: exp({}i phi sigma_{})",
            if sign > 0.0 { "-" } else { "+" },
            axis.letter()
        );
    }

    println!("\nphi      n  global dev  subspace dev");
    for n in 1..=5 {
        for phi in [0.3, FRAC_PI_2, 1.7] {
            let (global, subspace) = msgates::verify_ms_identity(phi, n)?;
            println!("{phi:<7.4}  {n}  {global:.3e}   {subspace:.3e}");
        }
    }
    println!("\nThe subspace deviation vanishes: the identity holds exactly once");
    println!("the ancilla starts in |0>. The global deviation 2|sin phi| shows");
    println!("the ancilla-|1> block carries the inverse phase instead.");
    Ok(())
}

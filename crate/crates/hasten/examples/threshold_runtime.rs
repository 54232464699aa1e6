//! How fast can the schedule get? For each pulse strength, find the
//! smallest runtime whose final fidelity reaches 0.999. The runtime shrinks
//! roughly like 1 / (1 + s/2) as the strength grows.
//!
//! Run with `cargo run --release --example threshold_runtime`.

use hasten::evolve::{self, RuntimeSearch};
use hasten::problem::Ec3Instance;
use hasten::signals::SignalSpec;

const THRESHOLD: f64 = 0.999;

fn main() -> hasten::Result<()> {
    let inst = Ec3Instance::load("@paper")?;
    println!("pulse train, delta = 0.08, duty 0.5, threshold F = {THRESHOLD}");
    println!("   s      T*");
    for (strength, range) in [(5.0, (5.0, 80.0)), (15.0, (2.0, 40.0)), (30.0, (1.0, 20.0))] {
        let signal = SignalSpec::PulseTrain {
            strength,
            interval: 0.08,
            duty: 0.5,
        };
        match evolve::min_runtime_for_threshold(&inst, &signal, THRESHOLD, range)? {
            RuntimeSearch::Found { t_star, fidelity } => {
                println!("{strength:4}  {t_star:7.2}  (F = {fidelity:.6})");
            }
            RuntimeSearch::NotFound { best_t, best_fidelity } => {
                println!(
                    "{strength:4}  not reached in {range:?}; best F = {best_fidelity:.6} at T = {best_t:.2}"
                );
            }
        }
    }
    println!("\nThe undriven baseline needs T near 160 for the same bar.");
    Ok(())
}

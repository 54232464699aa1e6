//! Stronger pulse trains buy fidelity at fixed runtime. The dressed
//! Hamiltonian (1 + c(t)) H0 runs "faster" whenever the pulse is high, so
//! at T = 40 the final fidelity climbs with the pulse strength.
//!
//! Run with `cargo run --release --example pulse_strength_sweep`.

use hasten::evolve::{self, Backend, ScheduleConfig};
use hasten::problem::Ec3Instance;
use hasten::signals::SignalSpec;

const TOTAL_TIME: f64 = 40.0;
const INTERVAL: f64 = 0.08;

fn main() -> hasten::Result<()> {
    let inst = Ec3Instance::load("@paper")?;
    println!("pulse train, delta = {INTERVAL}, duty 0.5, T = {TOTAL_TIME}");
    println!("  s    final fidelity");
    let mut last = 0.0;
    for strength in [0.0, 0.5, 1.0, 2.0] {
        let signal = SignalSpec::PulseTrain {
            strength,
            interval: INTERVAL,
            duty: 0.5,
        };
        let cfg = ScheduleConfig::new(
            TOTAL_TIME,
            evolve::default_steps(TOTAL_TIME, &signal),
            signal,
            Backend::DenseMidpoint,
            usize::MAX,
        )?;
        let f = evolve::propagate(&inst, &cfg)?.final_fidelity;
        println!("{strength:4}  {f:.6}{}", if f < last { "  (!)" } else { "" });
        last = f;
    }
    Ok(())
}

//! The undriven adiabatic baseline: without any fast signal the schedule
//! needs a long runtime before the final ground-state fidelity clears
//! 0.999. Sweeping T shows the slow approach.
//!
//! Run with `cargo run --release --example adiabatic_reference`.

use hasten::evolve::{self, Backend, ScheduleConfig};
use hasten::problem::Ec3Instance;
use hasten::signals::SignalSpec;

fn main() -> hasten::Result<()> {
    let inst = Ec3Instance::load("@paper")?;
    println!("  T    final fidelity");
    for total_time in [20.0, 40.0, 80.0, 160.0] {
        let cfg = ScheduleConfig::new(
            total_time,
            evolve::default_steps(total_time, &SignalSpec::Zero),
            SignalSpec::Zero,
            Backend::DenseMidpoint,
            usize::MAX,
        )?;
        let trace = evolve::propagate(&inst, &cfg)?;
        println!("{total_time:5}  {:.6}", trace.final_fidelity);
    }
    println!("\nT = 160 is the reference runtime: the first of these to pass 0.999.");
    Ok(())
}

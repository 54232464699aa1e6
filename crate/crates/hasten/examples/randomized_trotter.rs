//! The randomized Trotter formula: k slices, each one exact H_P pulse then
//! one exact H_B pulse. Drawing slice durations uniformly from a window
//! above the nominal tau beats the fixed-duration schedule, and a higher
//! window beats a lower one.
//!
//! Run with `cargo run --release --example randomized_trotter`.

use hasten::problem::Ec3Instance;
use hasten::rtf::{self, RtfSchedule};

const TOTAL_TIME: f64 = 20.0;
const K: usize = 500;
const SEEDS: u64 = 10;

fn seed_mean(inst: &Ec3Instance, lo: f64, hi: f64) -> hasten::Result<f64> {
    let mut sum = 0.0;
    for seed in 0..SEEDS {
        let sched = RtfSchedule::uniform(TOTAL_TIME, K, lo, hi, seed)?;
        sum += rtf::rtf_run(inst, &sched, usize::MAX)?.final_fidelity;
    }
    Ok(sum / SEEDS as f64)
}

fn main() -> hasten::Result<()> {
    let inst = Ec3Instance::load("@paper")?;
    println!("T = {TOTAL_TIME}, k = {K}, tau = {}", TOTAL_TIME / K as f64);

    let fixed = rtf::rtf_run(&inst, &RtfSchedule::fixed(TOTAL_TIME, K)?, usize::MAX)?;
    println!("fixed tau             {:.6}", fixed.final_fidelity);

    let low = seed_mean(&inst, 2.0, 3.0)?;
    println!("uniform [2t, 3t] mean {low:.6}  ({SEEDS} seeds)");

    let high = seed_mean(&inst, 4.0, 8.0)?;
    println!("uniform [4t, 8t] mean {high:.6}  ({SEEDS} seeds)");

    // a single seeded trace, decimated, as the CLI would write it
    let sched = RtfSchedule::uniform(TOTAL_TIME, K, 2.0, 3.0, 7)?;
    let trace = rtf::rtf_run(&inst, &sched, 100)?;
    println!("\nseed 7 trace (every 100th slice):");
    print!("{}", {
        let mut buf = Vec::new();
        trace.to_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("ascii csv")
    });
    Ok(())
}

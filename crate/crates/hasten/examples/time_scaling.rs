//! The exact mechanism behind the speedup: evolving J*H0 for T/J
//! reproduces evolving H0 for T, step for step. The deviation over the
//! whole trajectory sits at roundoff for any J.
//!
//! Run with `cargo run --release --example time_scaling`.

use hasten::evolve;
use hasten::problem::Ec3Instance;

fn main() -> hasten::Result<()> {
    let inst = Ec3Instance::load("@paper")?;
    let t0 = 160.0;
    let steps = 16000;
    println!("reference run: T0 = {t0}, {steps} steps");
    println!("   J   runtime  max deviation  final fidelity (scaled run)");
    for j in [1.0, 2.0, 4.0, 16.0] {
        let check = evolve::scale_check(&inst, j, t0, steps)?;
        println!(
            "{j:4}  {:8}  {:.3e}      {:.6}",
            t0 / j,
            check.max_deviation,
            check.final_fidelity_scaled
        );
    }
    println!("\nA fast signal of strength s realizes J = 1 + s on the fly,");
    println!("so the T0 schedule finishes in T0 / (1 + s).");
    Ok(())
}

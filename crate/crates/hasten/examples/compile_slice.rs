//! Compiling one Trotter slice to trapped-ion native gates: every Z-string
//! of the problem Hamiltonian becomes a basis-changed MS sandwich on its
//! support plus the ancilla, and the mixer becomes plain x-rotations.
//!
//! Run with `cargo run --example compile_slice`.

use hasten::msgates::{self, GateOp};
use hasten::problem::Ec3Instance;

fn main() -> hasten::Result<()> {
    let inst = Ec3Instance::load("@paper")?;
    let (j, k, tau) = (250, 500, 0.05);
    let seq = msgates::compile_slice(&inst, j, k, tau)?;

    let mut ms = 0;
    let mut rot = 0;
    for op in &seq.ops {
        match op {
            GateOp::Ms { .. } => ms += 1,
            GateOp::LocalRot { .. } | GateOp::AncRot { .. } => rot += 1,
            GateOp::Phase { .. } => {}
        }
    }
    println!("slice j={j} of k={k}, tau_j={tau}: {} ops ({ms} MS, {rot} rotations)", seq.ops.len());
    println!("\nlisting:");
    print!("{}", seq.listing());

    let deviation = msgates::compiled_slice_deviation(&inst, j, k, tau)?;
    println!("\nspectral deviation from the dense slice exponential: {deviation:.3e}");
    Ok(())
}

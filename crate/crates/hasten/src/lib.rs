//! Statevector laboratory for signal-assisted adiabatic search on 3-bit
//! exact cover (EC3).
//!
//! An EC3 instance over `n` bits is a set of clauses, each naming three
//! distinct bits; a clause is satisfied when exactly one of its bits is 1.
//! The library builds the transverse-field mixer `H_B` and the
//! clause-violation-counting problem Hamiltonian `H_P`, interpolates them
//! along `H0(t) = (1 - t/T) H_B + (t/T) H_P`, and integrates the dressed
//! Schrodinger equation `i dpsi/dt = (1 + c(t)/J0) H0(t) psi` for a
//! configurable fast signal `c(t)`. Driving the interpolation with a strong
//! signal compresses the runtime needed to reach a target ground-state
//! fidelity; the [`evolve`] module measures that directly and
//! [`evolve::scale_check`] verifies the underlying time-scaling identity
//! `U_{J H}(T/J) = U_H(T)` step for step.
//!
//! Two further layers mirror how such a schedule would run on hardware:
//! [`rtf`] implements the randomized Trotter formula (one exact `H_P` and
//! one exact `H_B` pulse per slice, with deterministic, random, or
//! signal-derived slice durations), and [`msgates`] compiles single slices
//! into Molmer-Sorensen gate sequences on an `n+1`-qubit register with an
//! ancilla, verifying the compiled unitaries against the dense reference.
//!
//! Entry points:
//! - [`problem::Ec3Instance`] parsing, validation, brute-force solving
//! - [`hamiltonian`] operator construction and Pauli expansions
//! - [`signals::SignalSpec`] the fast-signal family `c(t)`
//! - [`evolve::propagate`] dressed evolution with fidelity traces
//! - [`rtf::rtf_run`] randomized Trotter evolution
//! - [`msgates::compile_slice`] gate-level compilation of one slice
//!
//! The `hasten` binary exposes the same operations as subcommands; the
//! `examples/` directory holds one runnable walkthrough per capability.

pub mod cli;
pub mod error;
pub mod evolve;
pub mod hamiltonian;
pub mod linalg;
pub mod msgates;
pub mod pauli;
pub mod problem;
pub mod rtf;
pub mod signals;
pub mod state;

pub use error::{Error, Result};
pub use problem::Ec3Instance;
pub use state::StateVector;

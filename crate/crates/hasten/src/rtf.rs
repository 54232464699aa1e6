//! Randomized Trotter formula: the dressed evolution rewritten as a product
//! of k slices `exp(-i H_B (1-j/k) tau_j) exp(-i H_P (j/k) tau_j)` whose
//! uneven durations `tau_j = (1 + c(j tau)) tau` carry the fast signal.
//! Stretching a slice is operationally identical to strengthening the
//! Hamiltonian for the base interval, which is what makes the schedule a
//! hardware-friendly stand-in for the dressed drive.
//!
//! Both slice factors are applied exactly: the problem factor is a diagonal
//! phase, the mixer factor a product of commuting single-qubit x-rotations
//! times a global phase. The only approximation is the slicing itself, first
//! order in tau globally.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolve::{fidelity, FidelityTrace, TraceRow};
use crate::hamiltonian::{self, DEFAULT_DEGENERACY_TOL};
use crate::linalg::{expm_i_real_sym, spectral_norm, CVector};
use crate::problem::Ec3Instance;
use crate::signals::{unit_uniform, SignalSpec};
use crate::state::StateVector;

/// Slice schedule: `k` intervals summing over a base grid `j tau`, with
/// `k tau = T`. Intervals are materialized at construction so a schedule is
/// a plain value that can be inspected, logged, and replayed.
#[derive(Debug, Clone, PartialEq)]
pub struct RtfSchedule {
    k: usize,
    tau: f64,
    intervals: Vec<f64>,
}

impl RtfSchedule {
    /// All intervals equal to the base `tau = total_time / k`.
    pub fn fixed(total_time: f64, k: usize) -> Result<Self> {
        let tau = base_interval(total_time, k)?;
        Ok(RtfSchedule {
            k,
            tau,
            intervals: vec![tau; k],
        })
    }

    /// Interval `j` drawn uniformly from `[lo tau, hi tau]` using the
    /// counter-based generator at `(seed, j)`, `j = 1..=k`; reproducible and
    /// order-independent.
    pub fn uniform(total_time: f64, k: usize, lo: f64, hi: f64, seed: u64) -> Result<Self> {
        let tau = base_interval(total_time, k)?;
        if !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() {
            return Err(Error::Validation(format!(
                "interval multiplier range must satisfy 0 < lo <= hi, got [{lo}, {hi}]"
            )));
        }
        let intervals = (1..=k as u64)
            .map(|j| tau * (lo + (hi - lo) * unit_uniform(seed, j)))
            .collect();
        Ok(RtfSchedule { k, tau, intervals })
    }

    /// Intervals from a fast signal: `tau_j = (1 + c(j tau)) tau`, the exact
    /// correspondence between stretching a slice and dressing the
    /// Hamiltonian.
    pub fn from_signal(total_time: f64, k: usize, signal: &SignalSpec) -> Result<Self> {
        let tau = base_interval(total_time, k)?;
        signal.validate()?;
        let intervals: Vec<f64> = (1..=k)
            .map(|j| signal.dressed_coefficient(j as f64 * tau) * tau)
            .collect();
        let sched = RtfSchedule { k, tau, intervals };
        sched.check_positive()?;
        Ok(sched)
    }

    /// Explicit interval list; `k` is its length.
    pub fn from_intervals(tau: f64, intervals: Vec<f64>) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::Validation(format!(
                "base interval must be positive and finite, got {tau}"
            )));
        }
        if intervals.is_empty() {
            return Err(Error::Validation("schedule needs at least one slice".into()));
        }
        let sched = RtfSchedule {
            k: intervals.len(),
            tau,
            intervals,
        };
        sched.check_positive()?;
        Ok(sched)
    }

    fn check_positive(&self) -> Result<()> {
        for (j, &t) in self.intervals.iter().enumerate() {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::Validation(format!(
                    "slice interval {} must be positive and finite, got {t}",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Base interval `tau` with `k tau = T`.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn intervals(&self) -> &[f64] {
        &self.intervals
    }

    /// Wall-clock duration of the schedule, `sum tau_j` (equals `T` only for
    /// the fixed rule).
    pub fn scheduled_duration(&self) -> f64 {
        self.intervals.iter().sum()
    }
}

fn base_interval(total_time: f64, k: usize) -> Result<f64> {
    if !(total_time > 0.0) || !total_time.is_finite() {
        return Err(Error::Validation(format!(
            "total time must be positive and finite, got {total_time}"
        )));
    }
    if k == 0 {
        return Err(Error::Validation("slice count must be positive".into()));
    }
    Ok(total_time / k as f64)
}

struct SliceEngine {
    n_bits: usize,
    dim: usize,
    hp: Vec<f64>,
    weights: Vec<f64>,
    w0: f64,
}

impl SliceEngine {
    fn new(inst: &Ec3Instance) -> Result<Self> {
        if inst.n_bits() > crate::pauli::DENSE_MATRIX_CAP {
            return Err(Error::CapExceeded {
                what: "slice evolution qubits",
                limit: crate::pauli::DENSE_MATRIX_CAP,
                requested: inst.n_bits(),
            });
        }
        let (weights, w0) = hamiltonian::hb_weights(inst);
        Ok(SliceEngine {
            n_bits: inst.n_bits(),
            dim: inst.dimension(),
            hp: hamiltonian::build_hp_diagonal(inst)?.entries().to_vec(),
            weights,
            w0,
        })
    }

    /// `psi <- exp(-i beta H_P) psi` exactly (diagonal phase).
    fn apply_hp(&self, beta: f64, amps: &mut CVector) {
        for (idx, a) in amps.iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, -beta * self.hp[idx]);
        }
    }

    /// `psi <- exp(-i alpha H_B) psi` exactly: per-bit `exp(+i alpha w_i/2 X_i)`
    /// pair rotations and the `w0` global phase.
    fn apply_hb(&self, alpha: f64, amps: &mut CVector) {
        for (slot, &wi) in self.weights.iter().enumerate() {
            if wi == 0.0 {
                continue;
            }
            let theta = alpha * wi / 2.0;
            let c = theta.cos();
            let is = Complex64::new(0.0, theta.sin());
            let mask = 1usize << (self.n_bits - 1 - slot);
            for idx in 0..self.dim {
                if idx & mask == 0 {
                    let p = idx | mask;
                    let (a0, a1) = (amps[idx], amps[p]);
                    amps[idx] = c * a0 + is * a1;
                    amps[p] = is * a0 + c * a1;
                }
            }
        }
        let phase = Complex64::from_polar(1.0, -alpha * self.w0);
        for a in amps.iter_mut() {
            *a *= phase;
        }
    }

    fn slice(&self, j: usize, k: usize, tau_j: f64, amps: &mut CVector) {
        let s = j as f64 / k as f64;
        self.apply_hp(s * tau_j, amps);
        self.apply_hb((1.0 - s) * tau_j, amps);
    }
}

fn run<F>(inst: &Ec3Instance, sched: &RtfSchedule, mut visit: F) -> Result<()>
where
    F: FnMut(usize, &CVector) -> Result<()>,
{
    let engine = SliceEngine::new(inst)?;
    let mut amps: CVector = StateVector::uniform(inst.n_bits()).amplitudes().clone();
    visit(0, &amps)?;
    for j in 1..=sched.k {
        engine.slice(j, sched.k, sched.intervals[j - 1], &mut amps);
        visit(j, &amps)?;
    }
    let norm = amps.norm();
    if (norm - 1.0).abs() > crate::state::NORM_TOL {
        return Err(Error::Numeric(format!(
            "norm drifted to {norm:.12} over the slice product"
        )));
    }
    Ok(())
}

/// Runs the slice product from the mixer ground state, recording fidelity
/// against `ground_space(H0(j/k))` at every `record_every`-th slice boundary
/// (boundary 0 and the final boundary always). The trace's coefficient
/// column reports the stretch factor `tau_j / tau`, the slice analogue of
/// the dressed coefficient; 1 by convention on row 0.
pub fn rtf_run(
    inst: &Ec3Instance,
    sched: &RtfSchedule,
    record_every: usize,
) -> Result<FidelityTrace> {
    if record_every == 0 {
        return Err(Error::Validation("record_every must be positive".into()));
    }
    let mut rows: Vec<TraceRow> = Vec::new();
    let k = sched.k;
    let mut visit = |j: usize, amps: &CVector| -> Result<()> {
        if j % record_every != 0 && j != k {
            return Ok(());
        }
        let s = j as f64 / k as f64;
        let state = StateVector::new(inst.n_bits(), amps.clone())?;
        let gs = hamiltonian::ground_space(
            &hamiltonian::h0_matrix(inst, s)?,
            DEFAULT_DEGENERACY_TOL,
        )?;
        rows.push(TraceRow {
            t_over_t: s,
            fidelity: fidelity(&state, &gs),
            coefficient: if j == 0 {
                1.0
            } else {
                sched.intervals[j - 1] / sched.tau
            },
        });
        Ok(())
    };
    run(inst, sched, &mut visit)?;
    let final_fidelity = rows.last().expect("final boundary recorded").fidelity;
    Ok(FidelityTrace {
        rows,
        final_fidelity,
    })
}

/// Final state of the slice product, for convergence studies against the
/// continuous propagators.
pub fn rtf_final_state(inst: &Ec3Instance, sched: &RtfSchedule) -> Result<StateVector> {
    let mut kept: Option<CVector> = None;
    run(inst, sched, |_j, amps| {
        kept = Some(amps.clone());
        Ok(())
    })?;
    StateVector::new(inst.n_bits(), kept.expect("at least boundary 0 visited"))
}

/// Operator deviation between the two readings of a stretched slice:
/// evolving `H0(j/k)` for `tau_j = (1 + c) tau` versus evolving the
/// strengthened `(1 + c) H0(j/k)` for the base `tau`. The exponents are the
/// same matrix times the same scalar, so the deviation is pure roundoff.
pub fn slice_equivalence_check(
    inst: &Ec3Instance,
    j: usize,
    k: usize,
    c_over_j0: f64,
    tau: f64,
) -> Result<f64> {
    if k == 0 || j == 0 || j > k {
        return Err(Error::Validation(format!(
            "slice index must satisfy 1 <= j <= k, got j = {j}, k = {k}"
        )));
    }
    if !tau.is_finite() {
        return Err(Error::Validation(format!("tau must be finite, got {tau}")));
    }
    let s = j as f64 / k as f64;
    let h0 = hamiltonian::h0_matrix(inst, s)?;
    let stretched = expm_i_real_sym(&h0, (1.0 + c_over_j0) * tau)?;
    let strengthened = expm_i_real_sym(&(&h0 * (1.0 + c_over_j0)), tau)?;
    spectral_norm(&(stretched - strengthened))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{final_state, Backend, ScheduleConfig};

    fn reference() -> Ec3Instance {
        Ec3Instance::reference_instance()
    }

    #[test]
    fn fixed_schedule_shape() {
        let sched = RtfSchedule::fixed(20.0, 500).unwrap();
        assert_eq!(sched.k(), 500);
        assert!((sched.tau() - 0.04).abs() < 1e-15);
        assert!(sched.intervals().iter().all(|&t| (t - 0.04).abs() < 1e-15));
        assert!((sched.scheduled_duration() - 20.0).abs() < 1e-9);
        assert!(RtfSchedule::fixed(0.0, 500).is_err());
        assert!(RtfSchedule::fixed(20.0, 0).is_err());
    }

    #[test]
    fn uniform_schedule_reproducible_and_in_range() {
        let a = RtfSchedule::uniform(20.0, 500, 2.0, 3.0, 7).unwrap();
        let b = RtfSchedule::uniform(20.0, 500, 2.0, 3.0, 7).unwrap();
        assert_eq!(a, b);
        let c = RtfSchedule::uniform(20.0, 500, 2.0, 3.0, 8).unwrap();
        assert_ne!(a, c);
        let tau = a.tau();
        for &t in a.intervals() {
            assert!(t >= 2.0 * tau && t <= 3.0 * tau);
        }
        // frozen draws from the counter-based generator
        assert!((a.intervals()[0] - 9.860769802513950e-2).abs() < 1e-16);
        assert!((a.intervals()[499] - 8.367939425159414e-2).abs() < 1e-16);
        assert!(RtfSchedule::uniform(20.0, 500, 0.0, 3.0, 7).is_err());
        assert!(RtfSchedule::uniform(20.0, 500, 3.0, 2.0, 7).is_err());
    }

    #[test]
    fn signal_schedule_matches_waveform() {
        let signal = SignalSpec::PulseTrain {
            strength: 2.0,
            interval: 0.08,
            duty: 0.5,
        };
        let sched = RtfSchedule::from_signal(20.0, 500, &signal).unwrap();
        let tau = sched.tau();
        for (j, &t) in sched.intervals().iter().enumerate() {
            let expect = signal.dressed_coefficient((j + 1) as f64 * tau) * tau;
            assert_eq!(t, expect);
        }
    }

    #[test]
    fn single_slice_closed_form() {
        // k = 1: the mixer factor has coefficient 0, so the state is just
        // the problem phase applied to the uniform superposition
        let inst = reference();
        let sched = RtfSchedule::fixed(20.0, 1).unwrap();
        let state = rtf_final_state(&inst, &sched).unwrap();
        let hp = hamiltonian::build_hp_diagonal(&inst).unwrap();
        for (idx, amp) in state.amplitudes().iter().enumerate() {
            let expect = Complex64::from_polar(0.25, -20.0 * hp.entries()[idx]);
            assert!((amp - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn fixed_run_matches_frozen_baseline() {
        let inst = reference();
        let sched = RtfSchedule::fixed(20.0, 500).unwrap();
        let trace = rtf_run(&inst, &sched, 100).unwrap();
        assert!((trace.final_fidelity - 0.799784048).abs() < 1e-7);
        let state = rtf_final_state(&inst, &sched).unwrap();
        let expect = Complex64::new(6.892307041336979e-2, 7.968087189429898e-1);
        assert!((state.amplitudes()[4] - expect).norm() < 1e-9);
        let first = trace.rows.first().unwrap();
        assert_eq!((first.t_over_t, first.coefficient), (0.0, 1.0));
        assert!((first.fidelity - 1.0).abs() < 1e-12);
        assert_eq!(trace.rows.last().unwrap().t_over_t, 1.0);
    }

    #[test]
    fn seeded_run_matches_frozen_baseline() {
        let inst = reference();
        let sched = RtfSchedule::uniform(20.0, 500, 2.0, 3.0, 7).unwrap();
        let trace = rtf_run(&inst, &sched, 500).unwrap();
        assert!((trace.final_fidelity - 0.957026842).abs() < 1e-7);
    }

    #[test]
    fn convergence_is_first_order() {
        let inst = reference();
        let cfg = ScheduleConfig::new(20.0, 20_000, SignalSpec::Zero, Backend::DenseMidpoint, 20_000)
            .unwrap();
        let dense = final_state(&inst, &cfg).unwrap();
        let dev = |k: usize| {
            let sched = RtfSchedule::fixed(20.0, k).unwrap();
            rtf_final_state(&inst, &sched).unwrap().distance(&dense)
        };
        let d1 = dev(500);
        let d2 = dev(1000);
        assert!((d1 - 2.6378e-2).abs() < 1e-4, "d1 = {d1:.4e}");
        let ratio = d1 / d2;
        assert!((1.6..=2.4).contains(&ratio), "ratio {ratio:.3}");
    }

    #[test]
    fn slice_equivalence_is_roundoff() {
        let inst = reference();
        assert!(slice_equivalence_check(&inst, 250, 500, 1.5, 0.01).unwrap() <= 1e-12);
        assert!(slice_equivalence_check(&inst, 500, 500, 0.0, 0.04).unwrap() <= 1e-13);
        assert!(slice_equivalence_check(&inst, 0, 500, 1.0, 0.01).is_err());
        assert!(slice_equivalence_check(&inst, 501, 500, 1.0, 0.01).is_err());
    }
}

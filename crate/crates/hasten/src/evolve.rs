//! Time-ordered evolution under the dressed Hamiltonian
//! `H(t) = (1 + c(t)) H0(t/T)`, with fidelity tracked against the
//! instantaneous ground space of `H0`.
//!
//! Both backends freeze the Hamiltonian at each sub-step midpoint. Because
//! the integration grid is refined with the signal's breakpoints, piecewise
//! signals are exactly constant on every sub-step and the midpoint sample
//! is exact, not an approximation of the waveform.
//!
//! `dense_midpoint` applies the exact exponential of the frozen midpoint
//! Hamiltonian through its eigendecomposition; its only error is the
//! midpoint freezing itself, second order in the sub-step. `split_strang`
//! applies `exp(-i a H_B h/2) exp(-i b H_P h) exp(-i a H_B h/2)` with
//! `a, b` the dressed mixer/problem coefficients at the midpoint; the mixer
//! factor is a product of commuting single-qubit x-rotations plus a global
//! phase, the problem factor a diagonal phase, so each factor is exact and
//! the splitting is also second order.

use std::io;

use crate::error::{Error, Result};
use crate::hamiltonian::{self, GroundSpace, DEFAULT_DEGENERACY_TOL};
use crate::linalg::RVector;
use crate::pauli::DENSE_MATRIX_CAP;
use crate::problem::Ec3Instance;
use crate::signals::SignalSpec;
use crate::state::StateVector;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    DenseMidpoint,
    SplitStrang,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::DenseMidpoint => "dense",
            Backend::SplitStrang => "split",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" | "dense_midpoint" => Ok(Backend::DenseMidpoint),
            "split" | "split_strang" => Ok(Backend::SplitStrang),
            other => Err(Error::Parse(format!(
                "unknown backend `{other}`; expected dense or split"
            ))),
        }
    }
}

/// One evolution request: duration, step budget, signal, backend, and trace
/// decimation.
#[derive(Debug, Clone)]
pub struct ScheduleConfig {
    pub total_time: f64,
    pub steps: usize,
    pub signal: SignalSpec,
    pub backend: Backend,
    /// A trace row is recorded every `record_every`-th grid node (node 0 and
    /// the final node always).
    pub record_every: usize,
}

impl ScheduleConfig {
    pub fn new(
        total_time: f64,
        steps: usize,
        signal: SignalSpec,
        backend: Backend,
        record_every: usize,
    ) -> Result<Self> {
        let cfg = ScheduleConfig {
            total_time,
            steps,
            signal,
            backend,
            record_every,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.total_time > 0.0) {
            return Err(Error::Validation(format!(
                "total time must be > 0, got {}",
                self.total_time
            )));
        }
        if self.steps == 0 {
            return Err(Error::Validation("step count must be positive".into()));
        }
        if self.record_every == 0 {
            return Err(Error::Validation("record_every must be positive".into()));
        }
        self.signal.validate()?;
        let h = self.total_time / self.steps as f64;
        if let Some(limit) = self.signal.max_step() {
            if h > limit * (1.0 + 1e-12) {
                return Err(Error::Validation(format!(
                    "sub-step h = {h:.6} exceeds the signal's resolution limit {limit:.6} \
                     (h <= delta/4 for piecewise signals, h <= period/20 for oscillatory ones)"
                )));
            }
        }
        Ok(())
    }
}

/// One recorded trace point. `coefficient` is the dressed prefactor
/// `1 + c(t)` sampled at the row time itself (not the sub-step midpoint).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t_over_t: f64,
    pub fidelity: f64,
    pub coefficient: f64,
}

/// Fidelity trace of one run; rows are strictly increasing in `t_over_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityTrace {
    pub rows: Vec<TraceRow>,
    pub final_fidelity: f64,
}

impl FidelityTrace {
    /// Writes the documented CSV schema: header `t_over_T,fidelity,coefficient`,
    /// one row per recorded step, 13 significant digits.
    pub fn to_csv<W: io::Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "t_over_T,fidelity,coefficient")?;
        for row in &self.rows {
            writeln!(
                out,
                "{:.12e},{:.12e},{:.12e}",
                row.t_over_t, row.fidelity, row.coefficient
            )?;
        }
        Ok(())
    }
}

/// Projection norm of `state` onto the ground space; `|<psi0|psi>|` in the
/// non-degenerate case. Clamped to 1 against roundoff overshoot.
pub fn fidelity(state: &StateVector, gs: &GroundSpace) -> f64 {
    gs.project_norm(state).min(1.0)
}

/// Integration grid: `steps` uniform nodes over `[0, T]` refined with the
/// signal's breakpoints, deduplicated, so every discontinuity is a node.
fn time_grid(total_time: f64, steps: usize, signal: &SignalSpec) -> Vec<f64> {
    let h = total_time / steps as f64;
    let mut nodes: Vec<f64> = (0..=steps).map(|i| i as f64 * h).collect();
    nodes[steps] = total_time;
    nodes.extend(
        signal
            .breakpoints(total_time)
            .into_iter()
            .filter(|&t| t > 0.0 && t < total_time),
    );
    nodes.sort_by(f64::total_cmp);
    let tol = h * 1e-9;
    nodes.dedup_by(|b, a| (*b - *a).abs() <= tol);
    nodes
}

struct Engine {
    n_bits: usize,
    dim: usize,
    hb: crate::linalg::RMatrix,
    hp: Vec<f64>,
    weights: Vec<f64>,
    w0: f64,
}

impl Engine {
    fn new(inst: &Ec3Instance) -> Result<Self> {
        if inst.n_bits() > DENSE_MATRIX_CAP {
            return Err(Error::CapExceeded {
                what: "evolution qubits",
                limit: DENSE_MATRIX_CAP,
                requested: inst.n_bits(),
            });
        }
        let (weights, w0) = hamiltonian::hb_weights(inst);
        Ok(Engine {
            n_bits: inst.n_bits(),
            dim: inst.dimension(),
            hb: hamiltonian::hb_matrix(inst)?,
            hp: hamiltonian::build_hp_diagonal(inst)?.entries().to_vec(),
            weights,
            w0,
        })
    }

    fn dense_step(&self, a: f64, b: f64, dt: f64, re: &mut RVector, im: &mut RVector) -> Result<()> {
        let mut h = &self.hb * a;
        for (i, &e) in self.hp.iter().enumerate() {
            h[(i, i)] += b * e;
        }
        // the residual-checked decomposition matters here: near the end of
        // the schedule this matrix has clustered eigenvalues, and an
        // unverified QL basis injects per-step errors far above the
        // midpoint-rule error while staying perfectly norm-preserving
        let (vals, vecs) = crate::linalg::eigh_real(&h)?;
        let u_re = vecs.tr_mul(re);
        let u_im = vecs.tr_mul(im);
        let mut v_re = RVector::zeros(self.dim);
        let mut v_im = RVector::zeros(self.dim);
        for k in 0..self.dim {
            let theta = vals[k] * dt;
            let (c, s) = (theta.cos(), theta.sin());
            // multiply by exp(-i theta)
            v_re[k] = c * u_re[k] + s * u_im[k];
            v_im[k] = c * u_im[k] - s * u_re[k];
        }
        *re = &vecs * v_re;
        *im = &vecs * v_im;
        Ok(())
    }

    fn mixer_half(&self, a: f64, dt: f64, re: &mut RVector, im: &mut RVector) {
        // exp(-i (a dt/2) H_B) up to the global phase handled in the
        // diagonal pass: per-bit exp(+i theta X) pair rotations
        for (slot, &wi) in self.weights.iter().enumerate() {
            if wi == 0.0 {
                continue;
            }
            let theta = a * dt * wi / 4.0;
            let (c, s) = (theta.cos(), theta.sin());
            let mask = 1usize << (self.n_bits - 1 - slot);
            for idx in 0..self.dim {
                if idx & mask == 0 {
                    let p = idx | mask;
                    let (r0, i0, r1, i1) = (re[idx], im[idx], re[p], im[p]);
                    re[idx] = c * r0 - s * i1;
                    im[idx] = c * i0 + s * r1;
                    re[p] = c * r1 - s * i0;
                    im[p] = c * i1 + s * r0;
                }
            }
        }
    }

    fn split_step(&self, a: f64, b: f64, dt: f64, re: &mut RVector, im: &mut RVector) {
        self.mixer_half(a, dt, re, im);
        for idx in 0..self.dim {
            // diagonal problem phase plus both mixer halves' w0 phase
            let alpha = b * dt * self.hp[idx] + a * dt * self.w0;
            let (c, s) = (alpha.cos(), alpha.sin());
            let (r, i) = (re[idx], im[idx]);
            re[idx] = c * r + s * i;
            im[idx] = c * i - s * r;
        }
        self.mixer_half(a, dt, re, im);
    }
}

/// Walks the grid, calling `observer(node_index, t, re, im)` at every node
/// (including node 0 before any step). `scale` multiplies the whole
/// Hamiltonian; evolution under `J H0` is `scale = J`.
fn drive(
    inst: &Ec3Instance,
    total_time: f64,
    steps: usize,
    signal: &SignalSpec,
    backend: Backend,
    scale: f64,
    initial: &StateVector,
    observer: &mut dyn FnMut(usize, f64, &RVector, &RVector) -> Result<()>,
) -> Result<()> {
    if initial.n_bits() != inst.n_bits() {
        return Err(Error::Validation(format!(
            "initial state has {} bits, instance has {}",
            initial.n_bits(),
            inst.n_bits()
        )));
    }
    let engine = Engine::new(inst)?;
    let grid = time_grid(total_time, steps, signal);
    let mut re = initial.amplitudes().map(|c| c.re);
    let mut im = initial.amplitudes().map(|c| c.im);
    observer(0, grid[0], &re, &im)?;
    for idx in 1..grid.len() {
        let (ta, tb) = (grid[idx - 1], grid[idx]);
        let dt = tb - ta;
        let tm = 0.5 * (ta + tb);
        let coeff = scale * signal.dressed_coefficient(tm);
        let s_mid = (tm / total_time).clamp(0.0, 1.0);
        let (a, b) = (coeff * (1.0 - s_mid), coeff * s_mid);
        match backend {
            Backend::DenseMidpoint => engine.dense_step(a, b, dt, &mut re, &mut im)?,
            Backend::SplitStrang => engine.split_step(a, b, dt, &mut re, &mut im),
        }
        observer(idx, tb, &re, &im)?;
    }
    let norm2: f64 = re.norm_squared() + im.norm_squared();
    if (norm2.sqrt() - 1.0).abs() > crate::state::NORM_TOL {
        return Err(Error::Numeric(format!(
            "norm drifted to {:.12} over the run",
            norm2.sqrt()
        )));
    }
    Ok(())
}

fn state_from_parts(n_bits: usize, re: &RVector, im: &RVector) -> Result<StateVector> {
    let amps = nalgebra::DVector::from_iterator(
        re.len(),
        re.iter().zip(im.iter()).map(|(&r, &i)| Complex64::new(r, i)),
    );
    StateVector::new(n_bits, amps)
}

/// Evolves from the mixer ground state (the uniform superposition).
pub fn propagate(inst: &Ec3Instance, cfg: &ScheduleConfig) -> Result<FidelityTrace> {
    propagate_from(inst, cfg, &StateVector::uniform(inst.n_bits()))
}

/// Evolves `initial` under the dressed Hamiltonian, recording fidelity
/// against `ground_space(H0(t/T))` at decimated grid nodes.
pub fn propagate_from(
    inst: &Ec3Instance,
    cfg: &ScheduleConfig,
    initial: &StateVector,
) -> Result<FidelityTrace> {
    cfg.validate()?;
    let mut rows: Vec<TraceRow> = Vec::new();
    let grid_len = time_grid(cfg.total_time, cfg.steps, &cfg.signal).len();
    let last = grid_len - 1;
    let mut observer = |idx: usize, t: f64, re: &RVector, im: &RVector| -> Result<()> {
        if idx % cfg.record_every != 0 && idx != last {
            return Ok(());
        }
        let state = state_from_parts(inst.n_bits(), re, im)?;
        let s = (t / cfg.total_time).clamp(0.0, 1.0);
        let gs = hamiltonian::ground_space(
            &hamiltonian::h0_matrix(inst, s)?,
            DEFAULT_DEGENERACY_TOL,
        )?;
        rows.push(TraceRow {
            t_over_t: s,
            fidelity: fidelity(&state, &gs),
            coefficient: cfg.signal.dressed_coefficient(t),
        });
        Ok(())
    };
    drive(
        inst,
        cfg.total_time,
        cfg.steps,
        &cfg.signal,
        cfg.backend,
        1.0,
        initial,
        &mut observer,
    )?;
    let final_fidelity = rows.last().expect("final node recorded").fidelity;
    Ok(FidelityTrace {
        rows,
        final_fidelity,
    })
}

/// Final state of a run, for backend-comparison studies.
pub fn final_state(inst: &Ec3Instance, cfg: &ScheduleConfig) -> Result<StateVector> {
    cfg.validate()?;
    let mut kept: Option<(RVector, RVector)> = None;
    let mut observer = |_idx: usize, _t: f64, re: &RVector, im: &RVector| -> Result<()> {
        kept = Some((re.clone(), im.clone()));
        Ok(())
    };
    drive(
        inst,
        cfg.total_time,
        cfg.steps,
        &cfg.signal,
        cfg.backend,
        1.0,
        &StateVector::uniform(inst.n_bits()),
        &mut observer,
    )?;
    let (re, im) = kept.expect("at least the initial node visited");
    state_from_parts(inst.n_bits(), &re, &im)
}

/// Result of the time-scaling identity check.
#[derive(Debug, Clone, Copy)]
pub struct ScaleCheck {
    /// Max Euclidean distance between the two runs over the common grid.
    pub max_deviation: f64,
    /// Final fidelity of the reference run at duration `T0`.
    pub final_fidelity: f64,
    /// Final fidelity of the `J`-scaled run at duration `T0/J`.
    pub final_fidelity_scaled: f64,
}

/// Checks that evolving `J H0` for `T0/J` reproduces evolving `H0` for `T0`
/// step for step: both runs use the same step count, so step `m` of the
/// scaled run sits at `t_m/J` and the states should agree identically.
pub fn scale_check(inst: &Ec3Instance, j: f64, t0: f64, steps: usize) -> Result<ScaleCheck> {
    if !(j >= 1.0) || !j.is_finite() {
        return Err(Error::Domain(format!("scale factor J must be >= 1, got {j}")));
    }
    if !(t0 > 0.0) {
        return Err(Error::Validation(format!("T0 must be > 0, got {t0}")));
    }
    if steps == 0 {
        return Err(Error::Validation("step count must be positive".into()));
    }
    let signal = SignalSpec::Zero;
    let initial = StateVector::uniform(inst.n_bits());

    let mut reference: Vec<(RVector, RVector)> = Vec::with_capacity(steps + 1);
    let mut keep = |_idx: usize, _t: f64, re: &RVector, im: &RVector| -> Result<()> {
        reference.push((re.clone(), im.clone()));
        Ok(())
    };
    drive(
        inst,
        t0,
        steps,
        &signal,
        Backend::DenseMidpoint,
        1.0,
        &initial,
        &mut keep,
    )?;

    let mut max_deviation = 0.0f64;
    let mut last_scaled: Option<(RVector, RVector)> = None;
    let mut compare = |idx: usize, _t: f64, re: &RVector, im: &RVector| -> Result<()> {
        let (rr, ri) = &reference[idx];
        let d2 = (re - rr).norm_squared() + (im - ri).norm_squared();
        max_deviation = max_deviation.max(d2.sqrt());
        last_scaled = Some((re.clone(), im.clone()));
        Ok(())
    };
    drive(
        inst,
        t0 / j,
        steps,
        &signal,
        Backend::DenseMidpoint,
        j,
        &initial,
        &mut compare,
    )?;

    let gs = hamiltonian::ground_space(&hamiltonian::h0_matrix(inst, 1.0)?, DEFAULT_DEGENERACY_TOL)?;
    let (fr, fi) = reference.last().expect("reference recorded");
    let final_fidelity = fidelity(&state_from_parts(inst.n_bits(), fr, fi)?, &gs);
    let (sr, si) = last_scaled.expect("scaled run recorded");
    let final_fidelity_scaled = fidelity(&state_from_parts(inst.n_bits(), &sr, &si)?, &gs);
    Ok(ScaleCheck {
        max_deviation,
        final_fidelity,
        final_fidelity_scaled,
    })
}

/// Step budget used when the caller does not fix one: 100 sub-steps per
/// unit time, scaled up with the signal's peak dressed coefficient and
/// bumped to satisfy the signal's resolution limit.
pub fn default_steps(total_time: f64, signal: &SignalSpec) -> usize {
    let density = 100.0 * ((1.0 + signal.max_value()) / 2.0).max(1.0);
    let mut steps = (total_time * density).ceil() as usize;
    if let Some(limit) = signal.max_step() {
        steps = steps.max((total_time / limit).ceil() as usize);
    }
    steps.max(10)
}

/// Outcome of [`min_runtime_for_threshold`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuntimeSearch {
    Found { t_star: f64, fidelity: f64 },
    NotFound { best_t: f64, best_fidelity: f64 },
}

/// Smallest runtime in `t_range` whose final fidelity reaches
/// `f_threshold`, to 1% relative precision.
///
/// A geometric probe ladder across the range decides reachability and
/// checks that fidelity is monotone in `T`; if it is, the crossing is
/// bisected, otherwise a uniform grid scan brackets the first crossing
/// before bisecting. Probes run the dense backend at [`default_steps`].
pub fn min_runtime_for_threshold(
    inst: &Ec3Instance,
    signal: &SignalSpec,
    f_threshold: f64,
    t_range: (f64, f64),
) -> Result<RuntimeSearch> {
    if !(f_threshold > 0.0 && f_threshold <= 1.0) {
        return Err(Error::Domain(format!(
            "fidelity threshold must lie in (0, 1], got {f_threshold}"
        )));
    }
    let (t_lo, t_hi) = t_range;
    if !(t_lo > 0.0 && t_hi > t_lo) {
        return Err(Error::Domain(format!(
            "runtime range must satisfy 0 < lo < hi, got ({t_lo}, {t_hi})"
        )));
    }
    signal.validate()?;

    let probe = |t: f64| -> Result<f64> {
        let cfg = ScheduleConfig::new(
            t,
            default_steps(t, signal),
            signal.clone(),
            Backend::DenseMidpoint,
            usize::MAX,
        )?;
        Ok(propagate(inst, &cfg)?.final_fidelity)
    };

    const LADDER: usize = 9;
    let ratio = (t_hi / t_lo).powf(1.0 / (LADDER - 1) as f64);
    let mut ladder: Vec<(f64, f64)> = Vec::with_capacity(LADDER);
    for i in 0..LADDER {
        let t = if i == LADDER - 1 {
            t_hi
        } else {
            t_lo * ratio.powi(i as i32)
        };
        ladder.push((t, probe(t)?));
    }
    let &(best_t, best_fidelity) = ladder
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty ladder");

    let monotone = ladder.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-4);
    let bracket = if monotone {
        ladder
            .iter()
            .position(|&(_, f)| f >= f_threshold)
            .map(|i| {
                if i == 0 {
                    (None, ladder[0])
                } else {
                    (Some(ladder[i - 1].0), ladder[i])
                }
            })
    } else {
        // non-monotone: uniform scan for the first crossing
        let mut found = None;
        let mut prev = t_lo;
        const SCAN: usize = 160;
        for i in 0..=SCAN {
            let t = t_lo + (t_hi - t_lo) * i as f64 / SCAN as f64;
            let f = probe(t)?;
            if f >= f_threshold {
                found = Some((if i == 0 { None } else { Some(prev) }, (t, f)));
                break;
            }
            prev = t;
        }
        found
    };

    let Some((below, (mut hi_t, mut hi_f))) = bracket else {
        return Ok(RuntimeSearch::NotFound {
            best_t,
            best_fidelity,
        });
    };
    let Some(mut lo_t) = below else {
        // already passing at the lower edge of the range
        return Ok(RuntimeSearch::Found {
            t_star: hi_t,
            fidelity: hi_f,
        });
    };
    while hi_t - lo_t > 0.01 * hi_t {
        let mid = 0.5 * (lo_t + hi_t);
        let f = probe(mid)?;
        if f >= f_threshold {
            hi_t = mid;
            hi_f = f;
        } else {
            lo_t = mid;
        }
    }
    Ok(RuntimeSearch::Found {
        t_star: hi_t,
        fidelity: hi_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> Ec3Instance {
        Ec3Instance::reference_instance()
    }

    fn cfg(t: f64, steps: usize, signal: SignalSpec, backend: Backend) -> ScheduleConfig {
        ScheduleConfig::new(t, steps, signal, backend, usize::MAX).unwrap()
    }

    #[test]
    fn sudden_limit_freezes_state() {
        // T -> 0: the state stays put; final fidelity is the overlap of the
        // uniform state with the solution state, 1/4
        let trace = propagate(
            &reference(),
            &cfg(1e-6, 10, SignalSpec::Zero, Backend::DenseMidpoint),
        )
        .unwrap();
        assert!((trace.final_fidelity - 0.25).abs() < 1e-6);
    }

    #[test]
    fn trace_starts_at_unit_fidelity() {
        let c = ScheduleConfig::new(
            4.0,
            400,
            SignalSpec::PulseTrain {
                strength: 2.0,
                interval: 0.08,
                duty: 0.5,
            },
            Backend::DenseMidpoint,
            100,
        )
        .unwrap();
        let trace = propagate(&reference(), &c).unwrap();
        let first = trace.rows.first().unwrap();
        assert_eq!(first.t_over_t, 0.0);
        assert!((first.fidelity - 1.0).abs() < 1e-12);
        assert_eq!(first.coefficient, 3.0);
        for w in trace.rows.windows(2) {
            assert!(w[1].t_over_t > w[0].t_over_t);
        }
        for row in &trace.rows {
            assert!(row.fidelity >= 0.0 && row.fidelity <= 1.0 + 1e-12);
            let t = row.t_over_t * 4.0;
            assert_eq!(row.coefficient, c.signal.dressed_coefficient(t));
        }
    }

    #[test]
    fn zero_signal_t40_baseline() {
        let trace = propagate(
            &reference(),
            &cfg(40.0, 4000, SignalSpec::Zero, Backend::DenseMidpoint),
        )
        .unwrap();
        // frozen baseline value for this configuration
        assert!((trace.final_fidelity - 0.932885).abs() < 2e-4);
    }

    #[test]
    fn pulse_beats_zero_signal_at_t40() {
        let inst = reference();
        let zero = propagate(
            &inst,
            &cfg(40.0, 4000, SignalSpec::Zero, Backend::DenseMidpoint),
        )
        .unwrap();
        let pulse = propagate(
            &inst,
            &cfg(
                40.0,
                4000,
                SignalSpec::PulseTrain {
                    strength: 2.0,
                    interval: 0.08,
                    duty: 0.5,
                },
                Backend::DenseMidpoint,
            ),
        )
        .unwrap();
        assert!(pulse.final_fidelity > zero.final_fidelity + 0.03);
    }

    #[test]
    fn splitting_error_is_second_order() {
        // split and dense share the midpoint freezing, so their difference
        // isolates the Strang splitting error, which must scale as h^2
        let inst = reference();
        let gap = |steps: usize| {
            let dense = final_state(
                &inst,
                &cfg(8.0, steps, SignalSpec::Zero, Backend::DenseMidpoint),
            )
            .unwrap();
            let split = final_state(
                &inst,
                &cfg(8.0, steps, SignalSpec::Zero, Backend::SplitStrang),
            )
            .unwrap();
            dense.distance(&split)
        };
        let d1 = gap(8000);
        let d2 = gap(16000);
        let ratio = d1 / d2;
        assert!((3.2..=4.8).contains(&ratio), "ratio {ratio:.3}");
    }

    #[test]
    fn projection_geometry() {
        let inst = reference();
        let gs = hamiltonian::ground_space(
            &hamiltonian::h0_matrix(&inst, 1.0).unwrap(),
            DEFAULT_DEGENERACY_TOL,
        )
        .unwrap();
        let solution = StateVector::basis(4, 4).unwrap();
        assert!((fidelity(&solution, &gs) - 1.0).abs() < 1e-12);
        let orthogonal = StateVector::basis(4, 7).unwrap();
        assert!(fidelity(&orthogonal, &gs) < 1e-12);
        let mut amps = nalgebra::DVector::from_element(16, Complex64::new(0.0, 0.0));
        amps[4] = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
        amps[7] = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
        let mixed = StateVector::new(4, amps).unwrap();
        let expect = 1.0 / 2f64.sqrt();
        assert!((fidelity(&mixed, &gs) - expect).abs() < 1e-12);
    }

    #[test]
    fn step_limits_enforced() {
        let pulse = SignalSpec::PulseTrain {
            strength: 2.0,
            interval: 0.08,
            duty: 0.5,
        };
        // h = 0.04 > delta/4 = 0.02
        assert!(ScheduleConfig::new(40.0, 1000, pulse, Backend::DenseMidpoint, 1).is_err());
        let cos2 = SignalSpec::Cos2 {
            amplitude: 2.0,
            frequency: 10.0,
        };
        // h = 0.04 > period/20 = 0.0314
        assert!(ScheduleConfig::new(40.0, 1000, cos2.clone(), Backend::DenseMidpoint, 1).is_err());
        assert!(ScheduleConfig::new(40.0, 2000, cos2, Backend::DenseMidpoint, 1).is_ok());
    }

    #[test]
    fn scaling_identity_holds() {
        let inst = reference();
        let r = scale_check(&inst, 1.0, 16.0, 800).unwrap();
        assert_eq!(r.max_deviation, 0.0);
        let r4 = scale_check(&inst, 4.0, 16.0, 800).unwrap();
        assert!(r4.max_deviation < 1e-9, "deviation {}", r4.max_deviation);
        assert!((r4.final_fidelity - r4.final_fidelity_scaled).abs() < 1e-9);
        assert!(scale_check(&inst, 0.5, 16.0, 100).is_err());
    }

    #[test]
    fn runtime_search_finds_crossing() {
        let inst = reference();
        let signal = SignalSpec::PulseTrain {
            strength: 2.0,
            interval: 0.08,
            duty: 0.5,
        };
        match min_runtime_for_threshold(&inst, &signal, 0.9, (2.0, 40.0)).unwrap() {
            RuntimeSearch::Found { t_star, fidelity } => {
                assert!(fidelity >= 0.9);
                assert!(t_star > 2.0 && t_star < 40.0);
                // crossing is genuine: 1% below must miss the threshold
                let below = propagate(
                    &inst,
                    &cfg(
                        t_star * 0.95,
                        default_steps(t_star * 0.95, &signal),
                        signal.clone(),
                        Backend::DenseMidpoint,
                    ),
                )
                .unwrap();
                assert!(below.final_fidelity < 0.9 + 5e-3);
            }
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn runtime_search_reports_unreachable() {
        let inst = reference();
        match min_runtime_for_threshold(&inst, &SignalSpec::Zero, 0.999, (0.5, 4.0)).unwrap() {
            RuntimeSearch::NotFound {
                best_t,
                best_fidelity,
            } => {
                assert!(best_fidelity < 0.999);
                assert!(best_t >= 0.5 && best_t <= 4.0);
            }
            other => panic!("expected NotFound, got {other:?}"),
        }
    }
}


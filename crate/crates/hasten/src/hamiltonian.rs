//! Mixer and problem Hamiltonians, their interpolation, and ground-space
//! extraction.
//!
//! The mixer counts clause membership: a bit in `m` clauses contributes
//! `m/2 (1 - X_i)`, so `H_B = w0 I - sum_i (w_i/2) X_i` with `w_i` the bit
//! multiplicity and `w0 = (sum_i w_i)/2`. Its ground state is the uniform
//! superposition at energy 0 for every instance. The problem Hamiltonian is
//! diagonal and counts violated clauses; its Pauli form comes from the
//! Walsh-Hadamard transform of that diagonal and is exact in binary floating
//! point (all coefficients are dyadic rationals).

use crate::error::{Error, Result};
use crate::linalg::{self, RMatrix};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::problem::Ec3Instance;
use crate::state::StateVector;
use num_complex::Complex64;

/// Cap for diagonal (length `2^n`) representations.
pub const DIAGONAL_CAP: usize = 20;

/// Default energy window for declaring eigenvalues degenerate; instance
/// spectral gaps are O(0.1), so this cleanly separates genuine degeneracy
/// from numerical noise.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

/// A diagonal operator as its `2^n` basis-indexed entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    n_bits: usize,
    entries: Vec<f64>,
}

impl DiagonalOperator {
    pub fn new(n_bits: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != 1 << n_bits {
            return Err(Error::Validation(format!(
                "diagonal over {} bits needs {} entries, got {}",
                n_bits,
                1usize << n_bits,
                entries.len()
            )));
        }
        Ok(DiagonalOperator { n_bits, entries })
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Mixer weights: per-bit `w_i` (slot `i - 1`) and the identity offset `w0`.
pub fn hb_weights(inst: &Ec3Instance) -> (Vec<f64>, f64) {
    let w: Vec<f64> = inst
        .bit_multiplicities()
        .into_iter()
        .map(|m| m as f64)
        .collect();
    let w0 = w.iter().sum::<f64>() / 2.0;
    (w, w0)
}

/// `H_B = w0 I - sum_i (w_i/2) X_i` as a Pauli sum.
pub fn build_hb(inst: &Ec3Instance) -> PauliSum {
    let n = inst.n_bits();
    let (w, w0) = hb_weights(inst);
    let mut sum = PauliSum::new(n);
    sum.add(PauliString::identity(w0, n)).expect("same width");
    for (slot, &wi) in w.iter().enumerate() {
        if wi != 0.0 {
            sum.add(PauliString::single(-wi / 2.0, n, slot + 1, Pauli::X))
                .expect("same width");
        }
    }
    sum
}

/// The violated-clause-count diagonal of `H_P`.
pub fn build_hp_diagonal(inst: &Ec3Instance) -> Result<DiagonalOperator> {
    let n = inst.n_bits();
    if n > DIAGONAL_CAP {
        return Err(Error::CapExceeded {
            what: "diagonal construction bits",
            limit: DIAGONAL_CAP,
            requested: n,
        });
    }
    let entries = (0..inst.dimension())
        .map(|idx| {
            let a = crate::problem::Assignment::from_index(idx, n).expect("in range");
            f64::from(inst.violated_count(&a))
        })
        .collect();
    DiagonalOperator::new(n, entries)
}

/// Expands a diagonal operator over {I,Z} Pauli strings via the
/// Walsh-Hadamard transform: the coefficient of string `S` is
/// `2^-n sum_a (-1)^{parity(S & a)} entries[a]`. Exactly-zero coefficients
/// are dropped; reconstruction of the diagonal is exact for integer-valued
/// input.
pub fn diagonal_to_pauli(diag: &DiagonalOperator) -> Result<PauliSum> {
    let n = diag.n_bits();
    let dim = 1usize << n;
    let mut acc = diag.entries().to_vec();
    let mut len = 1;
    while len < dim {
        let mut i = 0;
        while i < dim {
            for j in i..i + len {
                let (u, v) = (acc[j], acc[j + len]);
                acc[j] = u + v;
                acc[j + len] = u - v;
            }
            i += 2 * len;
        }
        len *= 2;
    }
    let mut sum = PauliSum::new(n);
    for (mask, &raw) in acc.iter().enumerate() {
        let coefficient = raw / dim as f64;
        if coefficient == 0.0 {
            continue;
        }
        let letters = (0..n)
            .map(|slot| {
                if (mask >> (n - 1 - slot)) & 1 == 1 {
                    Pauli::Z
                } else {
                    Pauli::I
                }
            })
            .collect();
        sum.add(PauliString::new(coefficient, letters)?)?;
    }
    Ok(sum)
}

/// Pauli form of the problem Hamiltonian.
pub fn hp_to_pauli(inst: &Ec3Instance) -> Result<PauliSum> {
    diagonal_to_pauli(&build_hp_diagonal(inst)?)
}

/// Dense real symmetric matrix of the mixer.
pub fn hb_matrix(inst: &Ec3Instance) -> Result<RMatrix> {
    let n = inst.n_bits();
    if n > crate::pauli::DENSE_MATRIX_CAP {
        return Err(Error::CapExceeded {
            what: "dense matrix qubits",
            limit: crate::pauli::DENSE_MATRIX_CAP,
            requested: n,
        });
    }
    let dim = inst.dimension();
    let (w, w0) = hb_weights(inst);
    let mut m = RMatrix::zeros(dim, dim);
    for a in 0..dim {
        m[(a, a)] += w0;
        for (slot, &wi) in w.iter().enumerate() {
            let b = a ^ (1 << (n - 1 - slot));
            m[(a, b)] -= wi / 2.0;
        }
    }
    Ok(m)
}

/// `H0(s) = (1-s) H_B + s H_P` as a dense real symmetric matrix.
pub fn h0_matrix(inst: &Ec3Instance, s: f64) -> Result<RMatrix> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!(
            "interpolation parameter s must lie in [0, 1], got {s}"
        )));
    }
    let mut m = hb_matrix(inst)?;
    m *= 1.0 - s;
    let diag = build_hp_diagonal(inst)?;
    for (i, &e) in diag.entries().iter().enumerate() {
        m[(i, i)] += s * e;
    }
    Ok(m)
}

/// The lowest eigenspace of a real symmetric operator.
#[derive(Debug, Clone)]
pub struct GroundSpace {
    pub energy: f64,
    pub degeneracy: usize,
    basis: Vec<StateVector>,
}

impl GroundSpace {
    /// Orthonormal spanning set.
    pub fn basis(&self) -> &[StateVector] {
        &self.basis
    }

    /// Euclidean norm of the projection of `state` onto the space;
    /// `|<psi0|psi>|` in the non-degenerate case.
    pub fn project_norm(&self, state: &StateVector) -> f64 {
        self.basis
            .iter()
            .map(|b| b.inner(state).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Extracts the ground space of a real symmetric matrix over a qubit
/// register: all eigenvectors within `degeneracy_tol` of the lowest
/// eigenvalue.
pub fn ground_space(h: &RMatrix, degeneracy_tol: f64) -> Result<GroundSpace> {
    let dim = h.nrows();
    if !dim.is_power_of_two() {
        return Err(Error::Validation(format!(
            "ground_space needs a qubit-register dimension (power of two), got {dim}"
        )));
    }
    let n_bits = dim.trailing_zeros() as usize;
    let (vals, vecs) = linalg::eigh_real(h)?;
    let energy = vals[0];
    let mut basis = Vec::new();
    for k in 0..dim {
        if vals[k] - energy <= degeneracy_tol {
            let col = vecs.column(k).map(|x| Complex64::new(x, 0.0));
            basis.push(StateVector::new(n_bits, col)?);
        } else {
            break;
        }
    }
    Ok(GroundSpace {
        energy,
        degeneracy: basis.len(),
        basis,
    })
}

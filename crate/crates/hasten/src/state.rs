//! Complex state vectors over the computational basis.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Norm deviation tolerated by [`StateVector::new`] and the evolution
/// drivers.
pub const NORM_TOL: f64 = 1e-9;

/// A normalized amplitude vector over the `2^n` computational basis states.
///
/// Basis index convention: bit 1 of the assignment is the most significant
/// bit of the index, so for n = 4 the assignment `0100` sits at index 4.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_bits: usize,
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    /// Wraps raw amplitudes, checking dimension and normalization.
    pub fn new(n_bits: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_bits {
            return Err(Error::Validation(format!(
                "state over {} bits needs {} amplitudes, got {}",
                n_bits,
                1usize << n_bits,
                amplitudes.len()
            )));
        }
        let state = StateVector { n_bits, amplitudes };
        state.check_norm()?;
        Ok(state)
    }

    /// The uniform superposition `|+>^n`, ground state of every mixer built
    /// by this crate.
    pub fn uniform(n_bits: usize) -> Self {
        let dim = 1usize << n_bits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        StateVector {
            n_bits,
            amplitudes: DVector::from_element(dim, amp),
        }
    }

    /// The computational basis state at `index`.
    pub fn basis(n_bits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_bits;
        if index >= dim {
            return Err(Error::Validation(format!(
                "basis index {index} out of range for {n_bits} bits"
            )));
        }
        let mut amplitudes = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_bits, amplitudes })
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Euclidean distance `||self - other||`.
    pub fn distance(&self, other: &StateVector) -> f64 {
        (&self.amplitudes - &other.amplitudes).norm()
    }

    pub(crate) fn check_norm(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Numeric(format!(
                "state norm drifted to {norm:.12} (tolerance {NORM_TOL:.0e})"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_is_normalized() {
        let psi = StateVector::uniform(4);
        assert_eq!(psi.dim(), 16);
        assert!((psi.norm() - 1.0).abs() < 1e-15);
        assert!((psi.amplitudes()[7].re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn basis_inner_products() {
        let a = StateVector::basis(3, 2).unwrap();
        let b = StateVector::basis(3, 5).unwrap();
        assert!((a.inner(&a).re - 1.0).abs() < 1e-15);
        assert_eq!(a.inner(&b), Complex64::new(0.0, 0.0));
        assert!((a.distance(&b) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized() {
        let raw = DVector::from_element(4, Complex64::new(1.0, 0.0));
        assert!(StateVector::new(2, raw).is_err());
    }
}

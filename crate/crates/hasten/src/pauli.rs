//! Pauli strings and sums with real coefficients.
//!
//! Letter order inside a string follows the bit-index convention of
//! [`crate::problem`]: slot 0 is bit 1, the most significant bit of the
//! basis index. Sums keep their terms in canonical order (lexicographic by
//! letter sequence with I < X < Y < Z) with equal letter sequences merged,
//! so a sum is a normal form and comparison is meaningful.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Dense materialization cap: `2^DENSE_MATRIX_CAP` square matrices.
pub const DENSE_MATRIX_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => CMatrix::from_row_slice(2, 2, &[l, o, o, l]),
            Pauli::X => CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            Pauli::Y => CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
            Pauli::Z => CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// One tensor-product term: a letter per qubit and a real coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub coefficient: f64,
    pub letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(coefficient: f64, letters: Vec<Pauli>) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::Validation(format!(
                "pauli coefficient must be finite, got {coefficient}"
            )));
        }
        Ok(PauliString {
            coefficient,
            letters,
        })
    }

    /// The identity string on `n` qubits.
    pub fn identity(coefficient: f64, n_bits: usize) -> Self {
        PauliString {
            coefficient,
            letters: vec![Pauli::I; n_bits],
        }
    }

    /// A single non-identity letter at 1-based bit `bit`.
    pub fn single(coefficient: f64, n_bits: usize, bit: usize, p: Pauli) -> Self {
        let mut letters = vec![Pauli::I; n_bits];
        letters[bit - 1] = p;
        PauliString {
            coefficient,
            letters,
        }
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// 1-based bit positions carrying non-identity letters.
    pub fn support(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Compact label: `Z1Z2Z3`, `X2`, or bare `I` for the identity string.
    pub fn label(&self) -> String {
        let mut s = String::new();
        for (i, &p) in self.letters.iter().enumerate() {
            if p != Pauli::I {
                s.push(p.letter());
                s.push_str(&(i + 1).to_string());
            }
        }
        if s.is_empty() {
            s.push('I');
        }
        s
    }

    /// Dense matrix of the term including its coefficient.
    pub fn dense(&self) -> Result<CMatrix> {
        check_dense_cap(self.letters.len())?;
        let mut m = DMatrix::from_element(1, 1, Complex64::new(self.coefficient, 0.0));
        for &p in &self.letters {
            m = m.kronecker(&p.matrix());
        }
        Ok(m)
    }

    /// Eigenvalue of a {I,Z}-only string on basis state `index`.
    ///
    /// Fails on X/Y letters, which are not diagonal.
    pub fn diagonal_eigenvalue(&self, index: usize) -> Result<f64> {
        let n = self.letters.len();
        let mut sign = 1.0;
        for (slot, &p) in self.letters.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::Z => {
                    if (index >> (n - 1 - slot)) & 1 == 1 {
                        sign = -sign;
                    }
                }
                _ => {
                    return Err(Error::Domain(format!(
                        "term {} is not diagonal",
                        self.label()
                    )))
                }
            }
        }
        Ok(sign * self.coefficient)
    }
}

/// A Hermitian operator as a merged, canonically ordered list of terms.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_bits: usize,
    terms: Vec<PauliString>,
}

impl PauliSum {
    pub fn new(n_bits: usize) -> Self {
        PauliSum {
            n_bits,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(n_bits: usize, terms: Vec<PauliString>) -> Result<Self> {
        let mut sum = PauliSum::new(n_bits);
        for t in terms {
            sum.add(t)?;
        }
        Ok(sum)
    }

    /// Merges a term into the sum; terms whose coefficient cancels to
    /// exactly zero are dropped.
    pub fn add(&mut self, term: PauliString) -> Result<()> {
        if term.letters.len() != self.n_bits {
            return Err(Error::Validation(format!(
                "term on {} qubits added to a {}-qubit sum",
                term.letters.len(),
                self.n_bits
            )));
        }
        if !term.coefficient.is_finite() {
            return Err(Error::Validation(
                "pauli coefficient must be finite".into(),
            ));
        }
        match self
            .terms
            .binary_search_by(|probe| probe.letters.cmp(&term.letters))
        {
            Ok(pos) => {
                self.terms[pos].coefficient += term.coefficient;
                if self.terms[pos].coefficient == 0.0 {
                    self.terms.remove(pos);
                }
            }
            Err(pos) => {
                if term.coefficient != 0.0 {
                    self.terms.insert(pos, term);
                }
            }
        }
        Ok(())
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    /// Terms in canonical (lexicographic) order.
    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    /// Coefficient of the given letter sequence, 0 if absent.
    pub fn coefficient_of(&self, letters: &[Pauli]) -> f64 {
        self.terms
            .binary_search_by(|probe| probe.letters.as_slice().cmp(letters))
            .map(|pos| self.terms[pos].coefficient)
            .unwrap_or(0.0)
    }

    pub fn dense(&self) -> Result<CMatrix> {
        check_dense_cap(self.n_bits)?;
        let dim = 1usize << self.n_bits;
        let mut m = CMatrix::zeros(dim, dim);
        for t in &self.terms {
            m += t.dense()?;
        }
        Ok(m)
    }

    /// Evaluates a {I,Z}-only sum on every basis state.
    pub fn diagonal(&self) -> Result<Vec<f64>> {
        let dim = 1usize << self.n_bits;
        let mut entries = vec![0.0; dim];
        for t in &self.terms {
            for (idx, e) in entries.iter_mut().enumerate() {
                *e += t.diagonal_eigenvalue(idx)?;
            }
        }
        Ok(entries)
    }

    /// The dump table: `label coefficient` per line in canonical order, with
    /// dyadic coefficients printed as exact fractions.
    pub fn format_table(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(&t.label());
            out.push(' ');
            out.push_str(&format_exact(t.coefficient));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_table())
    }
}

fn check_dense_cap(n_bits: usize) -> Result<()> {
    if n_bits > DENSE_MATRIX_CAP {
        return Err(Error::CapExceeded {
            what: "dense matrix qubits",
            limit: DENSE_MATRIX_CAP,
            requested: n_bits,
        });
    }
    Ok(())
}

/// Renders a coefficient as an exact reduced fraction when its denominator
/// is a small power of two (`15/8`, `-3/2`, `0`, `9/2`), falling back to
/// decimal otherwise.
pub fn format_exact(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    for k in 0..=30u32 {
        let num = x * (1u64 << k) as f64;
        if num.fract() == 0.0 && num.abs() < 9.0e15 {
            let mut n = num as i64;
            let mut d = 1i64 << k;
            while n % 2 == 0 && d % 2 == 0 {
                n /= 2;
                d /= 2;
            }
            return if d == 1 {
                n.to_string()
            } else {
                format!("{n}/{d}")
            };
        }
    }
    format!("{x:.12e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        let t = PauliString::single(1.0, 4, 2, Pauli::X);
        assert_eq!(t.label(), "X2");
        let mut letters = vec![Pauli::I; 4];
        letters[0] = Pauli::Z;
        letters[1] = Pauli::Z;
        letters[2] = Pauli::Z;
        assert_eq!(PauliString::new(0.5, letters).unwrap().label(), "Z1Z2Z3");
        assert_eq!(PauliString::identity(2.0, 4).label(), "I");
    }

    #[test]
    fn merge_and_cancel() {
        let mut sum = PauliSum::new(2);
        sum.add(PauliString::single(0.5, 2, 1, Pauli::Z)).unwrap();
        sum.add(PauliString::single(0.25, 2, 1, Pauli::Z)).unwrap();
        assert_eq!(sum.terms().len(), 1);
        assert_eq!(sum.terms()[0].coefficient, 0.75);
        sum.add(PauliString::single(-0.75, 2, 1, Pauli::Z)).unwrap();
        assert!(sum.terms().is_empty());
    }

    #[test]
    fn canonical_order() {
        let mut sum = PauliSum::new(2);
        sum.add(PauliString::single(1.0, 2, 1, Pauli::Z)).unwrap();
        sum.add(PauliString::identity(1.0, 2)).unwrap();
        sum.add(PauliString::single(1.0, 2, 2, Pauli::X)).unwrap();
        let labels: Vec<String> = sum.terms().iter().map(|t| t.label()).collect();
        // II < IX < ZI
        assert_eq!(labels, vec!["I", "X2", "Z1"]);
    }

    #[test]
    fn dense_single_z() {
        let t = PauliString::single(2.0, 1, 1, Pauli::Z);
        let m = t.dense().unwrap();
        assert_eq!(m[(0, 0)], Complex64::new(2.0, 0.0));
        assert_eq!(m[(1, 1)], Complex64::new(-2.0, 0.0));
    }

    #[test]
    fn diagonal_eigenvalues() {
        // Z1Z3 on 3 qubits, state 101 -> (-1)(-1) = +1
        let mut letters = vec![Pauli::Z, Pauli::I, Pauli::Z];
        let t = PauliString::new(0.5, letters.clone()).unwrap();
        assert_eq!(t.diagonal_eigenvalue(0b101).unwrap(), 0.5);
        assert_eq!(t.diagonal_eigenvalue(0b100).unwrap(), -0.5);
        letters[1] = Pauli::X;
        assert!(PauliString::new(1.0, letters)
            .unwrap()
            .diagonal_eigenvalue(0)
            .is_err());
    }

    #[test]
    fn exact_fractions() {
        assert_eq!(format_exact(0.0), "0");
        assert_eq!(format_exact(1.875), "15/8");
        assert_eq!(format_exact(-1.5), "-3/2");
        assert_eq!(format_exact(4.5), "9/2");
        assert_eq!(format_exact(-0.375), "-3/8");
        assert_eq!(format_exact(3.0), "3");
        assert!(format_exact(1.0 / 3.0).contains('e'));
    }

    #[test]
    fn dense_cap() {
        let t = PauliString::identity(1.0, 13);
        assert!(matches!(t.dense(), Err(Error::CapExceeded { .. })));
    }
}

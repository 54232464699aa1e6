//! Dense linear-algebra helpers shared by the propagators and gate builders.
//!
//! Everything here works on small matrices (register dimension at most a few
//! thousand), so exactness and clear contracts win over asymptotics. The
//! eigendecompositions run `nalgebra::SymmetricEigen` first and verify the
//! residual `||A V - V Lambda||`; if it is not at roundoff level the input is
//! re-diagonalized with a cyclic Jacobi sweep, which is slower but does not
//! share the QL iteration's accuracy loss on tightly clustered eigenvalues.
//! That loss is not hypothetical: the adiabatic Hamiltonian near the end of
//! the schedule is a near-diagonal matrix with degenerate diagonal entries,
//! and `SymmetricEigen` alone returns an orthogonal basis that fails the
//! eigenvector equation outright for some of those inputs. Eigenvalues always
//! come back sorted ascending.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;
pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Residual above this (scaled by `||A||_inf * n`) fails the decomposition.
const RESIDUAL_TOL: f64 = 1e-9;
/// Residual above this (same scaling) abandons the fast path for Jacobi.
const FALLBACK_TRIGGER: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 60;

fn inf_norm_r(m: &RMatrix) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

fn inf_norm_c(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.norm()))
}

fn sort_ascending_real(vals_raw: &RVector, vecs_raw: &RMatrix) -> (RVector, RMatrix) {
    let n = vals_raw.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals_raw[a].total_cmp(&vals_raw[b]));
    let vals = RVector::from_iterator(n, order.iter().map(|&i| vals_raw[i]));
    let mut vecs = RMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &vecs_raw.column(src));
    }
    (vals, vecs)
}

fn sort_ascending_complex(vals_raw: &RVector, vecs_raw: &CMatrix) -> (RVector, CMatrix) {
    let n = vals_raw.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals_raw[a].total_cmp(&vals_raw[b]));
    let vals = RVector::from_iterator(n, order.iter().map(|&i| vals_raw[i]));
    let mut vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &vecs_raw.column(src));
    }
    (vals, vecs)
}

fn residual_real(m: &RMatrix, vals: &RVector, vecs: &RMatrix) -> f64 {
    inf_norm_r(&(m * vecs - vecs * RMatrix::from_diagonal(vals)))
}

fn residual_complex(m: &CMatrix, vals: &RVector, vecs: &CMatrix) -> f64 {
    let lambda = CMatrix::from_diagonal(&vals.map(|x| Complex64::new(x, 0.0)));
    inf_norm_c(&(m * vecs - vecs * lambda))
}

/// One cyclic Jacobi rotation: the stable small root of
/// `t^2 - 2 tau t - 1 = 0` so the rotation angle stays below pi/4.
fn jacobi_t(tau: f64) -> f64 {
    if tau.abs() > 1e150 {
        -1.0 / (2.0 * tau)
    } else {
        -tau.signum() / (tau.abs() + tau.hypot(1.0))
    }
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix. Quadratically
/// convergent and accurate regardless of eigenvalue clustering; used as the
/// fallback when the QL fast path produces a bad basis.
fn jacobi_real(m: &RMatrix) -> Result<(RVector, RMatrix)> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = RMatrix::identity(n, n);
    let scale = inf_norm_r(m).max(f64::MIN_POSITIVE);
    for sweep in 0..=JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].abs());
            }
        }
        if off <= scale * 1e-15 {
            let (vals, vecs) = sort_ascending_real(&a.diagonal(), &v);
            return Ok((vals, vecs));
        }
        if sweep == JACOBI_MAX_SWEEPS {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                if g.abs() <= scale * 1e-18 {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * g);
                let t = jacobi_t(tau);
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                let (d1, d2) = (a[(p, p)], a[(q, q)]);
                a[(p, p)] = c * c * d1 + 2.0 * s * c * g + s * s * d2;
                a[(q, q)] = s * s * d1 - 2.0 * s * c * g + c * c * d2;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp + s * akq;
                    a[(p, k)] = a[(k, p)];
                    a[(k, q)] = c * akq - s * akp;
                    a[(q, k)] = a[(k, q)];
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp + s * vkq;
                    v[(k, q)] = c * vkq - s * vkp;
                }
            }
        }
    }
    Err(Error::Numeric(
        "Jacobi eigendecomposition failed to converge".into(),
    ))
}

/// Complex Hermitian cyclic Jacobi: the same rotation with the pivot's phase
/// folded in, so each step zeroes one off-diagonal pair exactly.
fn jacobi_hermitian(m: &CMatrix) -> Result<(RVector, CMatrix)> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n, n);
    let scale = inf_norm_c(m).max(f64::MIN_POSITIVE);
    for sweep in 0..=JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= scale * 1e-15 {
            let diag = RVector::from_iterator(n, (0..n).map(|i| a[(i, i)].re));
            let (vals, vecs) = sort_ascending_complex(&diag, &v);
            return Ok((vals, vecs));
        }
        if sweep == JACOBI_MAX_SWEEPS {
            break;
        }
        let zero = Complex64::new(0.0, 0.0);
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                let r = g.norm();
                if r <= scale * 1e-18 {
                    a[(p, q)] = zero;
                    a[(q, p)] = zero;
                    continue;
                }
                let phase = g / r;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = jacobi_t(tau);
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                let (d1, d2) = (a[(p, p)].re, a[(q, q)].re);
                a[(p, p)] = Complex64::new(c * c * d1 + 2.0 * s * c * r + s * s * d2, 0.0);
                a[(q, q)] = Complex64::new(s * s * d1 - 2.0 * s * c * r + c * c * d2, 0.0);
                a[(p, q)] = zero;
                a[(q, p)] = zero;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp + s * phase.conj() * akq;
                    a[(p, k)] = a[(k, p)].conj();
                    a[(k, q)] = c * akq - s * phase * akp;
                    a[(q, k)] = a[(k, q)].conj();
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp + s * phase.conj() * vkq;
                    v[(k, q)] = c * vkq - s * phase * vkp;
                }
            }
        }
    }
    Err(Error::Numeric(
        "Jacobi eigendecomposition failed to converge".into(),
    ))
}

/// Eigendecomposition of a real symmetric matrix.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvalues sorted ascending and
/// eigenvector `k` in column `k`. Fails with [`Error::Numeric`] if the input
/// is not square or no backend reaches a roundoff-level residual (which in
/// practice means the matrix was not symmetric).
pub fn eigh_real(m: &RMatrix) -> Result<(RVector, RMatrix)> {
    if m.nrows() != m.ncols() {
        return Err(Error::Numeric(format!(
            "eigh_real needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    let scale = inf_norm_r(m).max(1.0) * n as f64;
    let eig = SymmetricEigen::new(m.clone());
    let (vals, vecs) = sort_ascending_real(&eig.eigenvalues, &eig.eigenvectors);
    if residual_real(m, &vals, &vecs) <= FALLBACK_TRIGGER * scale {
        return Ok((vals, vecs));
    }
    let (vals, vecs) = jacobi_real(m)?;
    let worst = residual_real(m, &vals, &vecs);
    if worst > RESIDUAL_TOL * scale {
        return Err(Error::Numeric(format!(
            "eigendecomposition residual {worst:.3e} exceeds tolerance; input not symmetric?"
        )));
    }
    Ok((vals, vecs))
}

/// Eigendecomposition of a complex Hermitian matrix.
///
/// Same contract as [`eigh_real`]: ascending real eigenvalues, unitary
/// eigenvector matrix, residual-verified with the Jacobi fallback.
pub fn eigh_hermitian(m: &CMatrix) -> Result<(RVector, CMatrix)> {
    if m.nrows() != m.ncols() {
        return Err(Error::Numeric(format!(
            "eigh_hermitian needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    let scale = inf_norm_c(m).max(1.0) * n as f64;
    let eig = SymmetricEigen::new(m.clone());
    let (vals, vecs) = sort_ascending_complex(&eig.eigenvalues, &eig.eigenvectors);
    if residual_complex(m, &vals, &vecs) <= FALLBACK_TRIGGER * scale {
        return Ok((vals, vecs));
    }
    let (vals, vecs) = jacobi_hermitian(m)?;
    let worst = residual_complex(m, &vals, &vecs);
    if worst > RESIDUAL_TOL * scale {
        return Err(Error::Numeric(format!(
            "eigendecomposition residual {worst:.3e} exceeds tolerance; input not Hermitian?"
        )));
    }
    Ok((vals, vecs))
}

/// `exp(-i t H)` for Hermitian `H`, via eigendecomposition.
pub fn expm_i_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let (vals, vecs) = eigh_hermitian(h)?;
    Ok(phase_conjugate(&vals, &vecs, t))
}

/// `exp(-i t H)` for a real symmetric `H`, returned as a complex matrix.
pub fn expm_i_real_sym(h: &RMatrix, t: f64) -> Result<CMatrix> {
    let (vals, vecs) = eigh_real(h)?;
    let cvecs = to_complex(&vecs);
    Ok(phase_conjugate(&vals, &cvecs, t))
}

fn phase_conjugate(vals: &RVector, vecs: &CMatrix, t: f64) -> CMatrix {
    let n = vals.len();
    let phases =
        CMatrix::from_diagonal(&DVector::from_iterator(n, vals.iter().map(|&l| {
            Complex64::from_polar(1.0, -l * t)
        })));
    vecs * phases * vecs.adjoint()
}

/// Spectral norm (largest singular value), computed from the top eigenvalue
/// of `A^dagger A`.
pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    let gram = m.adjoint() * m;
    let (vals, _) = eigh_hermitian(&gram)?;
    Ok(vals[vals.len() - 1].max(0.0).sqrt())
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Kronecker product, row-major qubit convention: `kron(A, B)` puts `A` on
/// the more significant subsystem.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

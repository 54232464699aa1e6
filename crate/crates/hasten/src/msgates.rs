//! Molmer-Sorensen gate synthesis for the slice exponentials.
//!
//! The X-string identity drives everything: on n + 1 qubits (qubit 0 an
//! ancilla),
//!
//! `U_MS(-pi/2, 0) U_anc(phi) U_MS(pi/2, 0) = exp(i phi sigma_z^anc (x) X-string)`,
//!
//! which restricted to the ancilla-|0> subspace is `exp(i phi X-string)` on
//! the system. The restriction is exact: the sandwiched operator is
//! block-diagonal in the ancilla z-basis, so the ancilla starts and ends in
//! |0> with no leakage. Z-strings follow by conjugating each support qubit
//! with the y-rotation that swaps the z and x axes, and a slice of the
//! randomized Trotter product compiles term by term from there.
//!
//! All verification is dense and capped at a 12-qubit register.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian;
use crate::linalg::{kron, spectral_norm, CMatrix};
use crate::pauli::{Pauli, DENSE_MATRIX_CAP};
use crate::problem::Ec3Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn letter(&self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }

    fn pauli(&self) -> CMatrix {
        match self {
            Axis::X => Pauli::X.matrix(),
            Axis::Y => Pauli::Y.matrix(),
            Axis::Z => Pauli::Z.matrix(),
        }
    }
}

/// One gate on the (n_system + 1)-qubit register; qubit 0 is the ancilla,
/// qubits 1..=n_system the problem bits.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    /// Collective `exp(-i theta/4 (cos phi S_x + sin phi S_y)^2)` over the
    /// addressed qubits (the ancilla plus a string's support).
    Ms {
        theta: f64,
        phi: f64,
        qubits: Vec<usize>,
    },
    /// Ancilla-local `exp(-i angle sigma_axis)`; note the full angle in
    /// the exponent, not the half-angle convention of [`GateOp::LocalRot`].
    AncRot { axis: Axis, angle: f64 },
    /// Single-qubit rotation `exp(-i angle/2 sigma_axis)`.
    LocalRot {
        qubit: usize,
        axis: Axis,
        angle: f64,
    },
    /// Global phase `e^{i angle}`.
    Phase { angle: f64 },
}

impl GateOp {
    /// The documented one-line listing form.
    pub fn listing_line(&self) -> String {
        match self {
            GateOp::Ms { theta, phi, .. } => format!("MS theta={theta} phi={phi}"),
            GateOp::AncRot { axis, angle } => {
                format!("ANC axis={} angle={}", axis.letter(), angle)
            }
            GateOp::LocalRot { qubit, axis, angle } => {
                format!("ROT q={} axis={} angle={}", qubit, axis.letter(), angle)
            }
            GateOp::Phase { angle } => format!("PHASE angle={angle}"),
        }
    }

    fn validate(&self, n_system: usize) -> Result<()> {
        let finite = |x: f64| x.is_finite();
        let ok = match self {
            GateOp::Ms { theta, phi, qubits } => {
                if qubits.iter().any(|&q| q > n_system) {
                    return Err(Error::Validation(format!(
                        "MS gate addresses qubit {} outside the register (n = {n_system})",
                        qubits.iter().max().unwrap()
                    )));
                }
                finite(*theta) && finite(*phi)
            }
            GateOp::AncRot { angle, .. } => finite(*angle),
            GateOp::LocalRot { qubit, angle, .. } => {
                if *qubit > n_system {
                    return Err(Error::Validation(format!(
                        "rotation addresses qubit {qubit} outside the register (n = {n_system})"
                    )));
                }
                finite(*angle)
            }
            GateOp::Phase { angle } => finite(*angle),
        };
        if !ok {
            return Err(Error::Validation("gate angle must be finite".into()));
        }
        Ok(())
    }

    fn matrix(&self, n_system: usize) -> Result<CMatrix> {
        let n_total = n_system + 1;
        match self {
            GateOp::Ms { theta, phi, qubits } => {
                let sub = collective_ms(*theta, *phi, qubits.len())?;
                Ok(embed(&sub, qubits, n_total))
            }
            GateOp::AncRot { axis, angle } => {
                // exp(-i angle sigma) = cos(angle) I - i sin(angle) sigma
                let u = CMatrix::identity(2, 2) * Complex64::new(angle.cos(), 0.0)
                    + axis.pauli() * Complex64::new(0.0, -angle.sin());
                Ok(embed(&u, &[0], n_total))
            }
            GateOp::LocalRot { qubit, axis, angle } => {
                let half = 0.5 * angle;
                let u = CMatrix::identity(2, 2) * Complex64::new(half.cos(), 0.0)
                    + axis.pauli() * Complex64::new(0.0, -half.sin());
                Ok(embed(&u, &[*qubit], n_total))
            }
            GateOp::Phase { angle } => {
                Ok(CMatrix::identity(1 << n_total, 1 << n_total)
                    * Complex64::from_polar(1.0, *angle))
            }
        }
    }
}

/// Ordered gate list on an (n_system + 1)-qubit register; `ops[0]` acts
/// first on the ket.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSequence {
    pub ops: Vec<GateOp>,
    pub n_system: usize,
}

impl GateSequence {
    pub fn new(n_system: usize, ops: Vec<GateOp>) -> Result<Self> {
        if n_system == 0 {
            return Err(Error::Validation("register needs at least one system qubit".into()));
        }
        check_register_cap(n_system + 1)?;
        for op in &ops {
            op.validate(n_system)?;
        }
        Ok(GateSequence { ops, n_system })
    }

    /// Full-register unitary of the composition, verified against
    /// `U^dagger U = I` within 1e-10.
    pub fn unitary(&self) -> Result<CMatrix> {
        let dim = 1usize << (self.n_system + 1);
        let mut u = CMatrix::identity(dim, dim);
        for op in &self.ops {
            u = op.matrix(self.n_system)? * u;
        }
        let dev = (u.adjoint() * &u - CMatrix::identity(dim, dim))
            .iter()
            .fold(0.0f64, |a, x| a.max(x.norm()));
        if dev > 1e-10 {
            return Err(Error::Numeric(format!(
                "gate sequence lost unitarity: deviation {dev:.3e}"
            )));
        }
        Ok(u)
    }

    /// The system-side operator with the ancilla in |0> before and after:
    /// `<0| U |0>_anc`, the upper-left block under the ancilla-as-top-qubit
    /// layout.
    pub fn system_unitary(&self) -> Result<CMatrix> {
        let u = self.unitary()?;
        let dim = 1usize << self.n_system;
        Ok(u.view((0, 0), (dim, dim)).into())
    }

    /// One listing line per op, in application order.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            out.push_str(&op.listing_line());
            out.push('\n');
        }
        out
    }
}

fn check_register_cap(n_total: usize) -> Result<()> {
    if n_total > DENSE_MATRIX_CAP {
        return Err(Error::CapExceeded {
            what: "gate register qubits",
            limit: DENSE_MATRIX_CAP,
            requested: n_total,
        });
    }
    Ok(())
}

/// `U_MS(theta, phi)` on an `n_total`-qubit register, all qubits addressed:
/// `exp(-i theta/4 (cos phi S_x + sin phi S_y)^2)`.
///
/// The collective operator `cos phi S_x + sin phi S_y` is a sum of
/// single-qubit operators with identical 2x2 eigenbases, so the exponential
/// is built in the product eigenbasis with eigenvalue `n_total - 2 popcount`
/// per basis label rather than through a register-sized eigensolve.
pub fn u_ms(theta: f64, phi: f64, n_total: usize) -> Result<CMatrix> {
    if n_total == 0 {
        return Err(Error::Validation("MS register must be non-empty".into()));
    }
    check_register_cap(n_total)?;
    collective_ms(theta, phi, n_total)
}

fn collective_ms(theta: f64, phi: f64, n_qubits: usize) -> Result<CMatrix> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::Validation("MS angles must be finite".into()));
    }
    let dim = 1usize << n_qubits;
    // eigenbasis of cos(phi) X + sin(phi) Y: (1, +-e^{i phi})/sqrt(2)
    let inv = 1.0 / 2f64.sqrt();
    let e = Complex64::from_polar(inv, phi);
    let v2 = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(inv, 0.0),
            Complex64::new(inv, 0.0),
            e,
            -e,
        ],
    );
    let mut w = CMatrix::identity(1, 1);
    for _ in 0..n_qubits {
        w = kron(&w, &v2);
    }
    // scale columns by the phase of the squared collective eigenvalue
    let mut wd = w.clone();
    for m in 0..dim {
        let lambda = n_qubits as f64 - 2.0 * m.count_ones() as f64;
        let ph = Complex64::from_polar(1.0, -(theta / 4.0) * lambda * lambda);
        for r in 0..dim {
            wd[(r, m)] *= ph;
        }
    }
    Ok(wd * w.adjoint())
}

/// The ancilla rotation rule of the X-string identity, keyed to the string
/// length n mod 4: returns the axis and the sign `s` in
/// `U_anc(phi) = exp(-i s phi sigma_axis)`.
pub fn anc_rule(n: usize) -> (Axis, f64) {
    match n % 4 {
        1 => (Axis::Y, 1.0),
        3 => (Axis::Y, -1.0),
        0 => (Axis::Z, -1.0),
        _ => (Axis::Z, 1.0), // n % 4 == 2
    }
}

/// `U_anc(phi)` for an n-qubit string, embedded ancilla-local on the
/// (n+1)-qubit register.
pub fn u_anc(phi: f64, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Validation("string length must be at least 1".into()));
    }
    check_register_cap(n + 1)?;
    if !phi.is_finite() {
        return Err(Error::Validation("ancilla angle must be finite".into()));
    }
    let (axis, sign) = anc_rule(n);
    GateOp::AncRot {
        axis,
        angle: sign * phi,
    }
    .matrix(n)
}

/// `exp(i phi X^{(x)n})` on n qubits, closed form from `(X-string)^2 = I`.
fn x_string_exp(phi: f64, n: usize) -> CMatrix {
    let dim = 1usize << n;
    let mut m = CMatrix::identity(dim, dim) * Complex64::new(phi.cos(), 0.0);
    let flip = dim - 1;
    for i in 0..dim {
        m[(i, i ^ flip)] += Complex64::new(0.0, phi.sin());
    }
    m
}

/// Measures both readings of the X-string identity on n + 1 qubits.
///
/// `global_dev`: spectral distance between the MS sandwich and
/// `I_anc (x) exp(i phi X-string)` on the whole register. `subspace_dev`:
/// the same distance after projecting the ancilla to |0> on both sides.
/// The subspace reading is the one that vanishes; the global deviation is
/// `2 |sin phi|` because the sandwich carries the ancilla's sigma_z.
pub fn verify_ms_identity(phi: f64, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Validation("string length must be at least 1".into()));
    }
    let n_total = n + 1;
    check_register_cap(n_total)?;
    let open = u_ms(std::f64::consts::FRAC_PI_2, 0.0, n_total)?;
    let close = u_ms(-std::f64::consts::FRAC_PI_2, 0.0, n_total)?;
    let r = close * u_anc(phi, n)? * open;
    let target = x_string_exp(phi, n);
    let global = spectral_norm(&(&r - kron(&CMatrix::identity(2, 2), &target)))?;
    let dim = 1usize << n;
    let block: CMatrix = r.view((0, 0), (dim, dim)).into();
    let subspace = spectral_norm(&(block - target))?;
    Ok((global, subspace))
}

/// Gate sequence implementing `exp(i phi Z-string)` on the given support,
/// on an (n_system + 1)-qubit register.
///
/// Each support qubit is conjugated by the y-rotation pair that maps its z
/// axis onto x (`exp(+i pi/4 Y) X exp(-i pi/4 Y) = Z`), the X-string is the
/// MS sandwich over support plus ancilla, and non-support qubits are simply
/// not addressed. The ancilla returns to |0> exactly.
pub fn z_string_via_ms(phi: f64, support: &[usize], n_system: usize) -> Result<GateSequence> {
    if support.is_empty() {
        return Err(Error::Validation("string support must be non-empty".into()));
    }
    let mut sup: Vec<usize> = support.to_vec();
    sup.sort_unstable();
    sup.dedup();
    if sup.len() != support.len() {
        return Err(Error::Validation("string support has repeated qubits".into()));
    }
    if sup[0] < 1 || sup[sup.len() - 1] > n_system {
        return Err(Error::Validation(format!(
            "string support must lie in 1..={n_system}"
        )));
    }
    check_register_cap(n_system + 1)?;
    let m = sup.len();
    let (axis, sign) = anc_rule(m);
    let mut qubits = Vec::with_capacity(m + 1);
    qubits.push(0usize);
    qubits.extend_from_slice(&sup);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut ops = Vec::with_capacity(2 * m + 3);
    for &q in &sup {
        ops.push(GateOp::LocalRot {
            qubit: q,
            axis: Axis::Y,
            angle: half_pi,
        });
    }
    ops.push(GateOp::Ms {
        theta: half_pi,
        phi: 0.0,
        qubits: qubits.clone(),
    });
    ops.push(GateOp::AncRot {
        axis,
        angle: sign * phi,
    });
    ops.push(GateOp::Ms {
        theta: -half_pi,
        phi: 0.0,
        qubits,
    });
    for &q in &sup {
        ops.push(GateOp::LocalRot {
            qubit: q,
            axis: Axis::Y,
            angle: -half_pi,
        });
    }
    GateSequence::new(n_system, ops)
}

/// Compiles one randomized-Trotter slice
/// `exp(-i H_B (1-j/k) tau_j) exp(-i H_P (j/k) tau_j)` to gates.
///
/// The problem factor goes first (term by term over the Pauli expansion's
/// Z-strings, which all commute, plus the identity coefficient as a global
/// phase), then the mixer factor as per-bit x-rotations plus the `w0`
/// phase. Zero-angle ops are dropped, so the j = k slice contains no mixer
/// gates at all.
pub fn compile_slice(inst: &Ec3Instance, j: usize, k: usize, tau_j: f64) -> Result<GateSequence> {
    if k == 0 || j == 0 || j > k {
        return Err(Error::Validation(format!(
            "slice index must satisfy 1 <= j <= k, got j = {j}, k = {k}"
        )));
    }
    if !(tau_j > 0.0) || !tau_j.is_finite() {
        return Err(Error::Validation(format!(
            "slice duration must be positive and finite, got {tau_j}"
        )));
    }
    let n = inst.n_bits();
    check_register_cap(n + 1)?;
    let s = j as f64 / k as f64;
    let beta = s * tau_j;
    let alpha = (1.0 - s) * tau_j;
    let mut ops: Vec<GateOp> = Vec::new();

    let hp = hamiltonian::hp_to_pauli(inst)?;
    for term in hp.terms() {
        let angle = -term.coefficient * beta;
        if angle == 0.0 {
            continue;
        }
        let support = term.support();
        if support.is_empty() {
            ops.push(GateOp::Phase { angle });
        } else {
            ops.extend(z_string_via_ms(angle, &support, n)?.ops);
        }
    }

    let (weights, w0) = hamiltonian::hb_weights(inst);
    if alpha != 0.0 {
        for (slot, &wi) in weights.iter().enumerate() {
            if wi == 0.0 {
                continue;
            }
            // exp(+i (w_i/2) alpha X) = R_x(-w_i alpha)
            ops.push(GateOp::LocalRot {
                qubit: slot + 1,
                axis: Axis::X,
                angle: -wi * alpha,
            });
        }
        ops.push(GateOp::Phase { angle: -w0 * alpha });
    }
    GateSequence::new(n, ops)
}

/// Spectral distance, after global-phase alignment, between a compiled
/// slice's system block and the dense slice exponential.
pub fn compiled_slice_deviation(
    inst: &Ec3Instance,
    j: usize,
    k: usize,
    tau_j: f64,
) -> Result<f64> {
    let seq = compile_slice(inst, j, k, tau_j)?;
    let sys = seq.system_unitary()?;
    let s = j as f64 / k as f64;
    let beta = s * tau_j;
    let alpha = (1.0 - s) * tau_j;
    let hb = hamiltonian::hb_matrix(inst)?;
    let u_hb = crate::linalg::expm_i_real_sym(&(&hb * alpha), 1.0)?;
    let hp = hamiltonian::build_hp_diagonal(inst)?;
    let dim = inst.dimension();
    let mut dense = u_hb;
    for col in 0..dim {
        let ph = Complex64::from_polar(1.0, -beta * hp.entries()[col]);
        for row in 0..dim {
            dense[(row, col)] *= ph;
        }
    }
    // align the free global phase before measuring
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..dim {
        for l in 0..dim {
            tr += dense[(l, i)].conj() * sys[(l, i)];
        }
    }
    let align = if tr.norm() > 0.0 {
        Complex64::from_polar(1.0, -tr.arg())
    } else {
        Complex64::new(1.0, 0.0)
    };
    spectral_norm(&(sys * align - dense))
}

/// Embeds a unitary on the listed register qubits (ascending, sub-register
/// most-significant-first) into the full `n_total`-qubit register.
fn embed(u: &CMatrix, qubits: &[usize], n_total: usize) -> CMatrix {
    let k = qubits.len();
    debug_assert_eq!(u.nrows(), 1 << k);
    let dim = 1usize << n_total;
    let rest: Vec<usize> = (0..n_total).filter(|q| !qubits.contains(q)).collect();
    let reg_bit = |q: usize| 1usize << (n_total - 1 - q);
    let mut full = CMatrix::zeros(dim, dim);
    for bg in 0..(1usize << rest.len()) {
        let mut base = 0usize;
        for (t, &q) in rest.iter().enumerate() {
            if (bg >> t) & 1 == 1 {
                base |= reg_bit(q);
            }
        }
        for col in 0..(1usize << k) {
            let mut col_reg = base;
            for (t, &q) in qubits.iter().enumerate() {
                if (col >> (k - 1 - t)) & 1 == 1 {
                    col_reg |= reg_bit(q);
                }
            }
            for row in 0..(1usize << k) {
                let mut row_reg = base;
                for (t, &q) in qubits.iter().enumerate() {
                    if (row >> (k - 1 - t)) & 1 == 1 {
                        row_reg |= reg_bit(q);
                    }
                }
                full[(row_reg, col_reg)] = u[(row, col)];
            }
        }
    }
    full
}

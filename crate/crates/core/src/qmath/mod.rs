//! Dense complex linear algebra on qubit registers.
//!
//! Qubit 0 is the leftmost symbol of a ket string, so in a register of `n`
//! qubits the bit of qubit `q` inside basis index `k` is
//! `(k >> (n - 1 - q)) & 1`. All logarithms are base 2.

mod measure;
mod ops;
mod spectral;
mod state;

use nalgebra::DMatrix;
use num_complex::Complex;

pub use measure::{bell_amplitudes, measure_bell, BellBranch, MeasureMode};
pub use ops::{
    apply_unitary, dephase, partial_trace, partial_transpose, partial_transpose_matrix, tensor,
};
pub use spectral::{
    fidelity, hermitian_eigen, min_eigenvalue, relative_entropy, von_neumann_entropy,
};
pub use state::{BellOutcome, DensityMatrix, PureState, QubitSubset, StateRef};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Tolerances shared across the crate.
pub mod tol {
    /// Norm of a pure state.
    pub const NORM: f64 = 1e-10;
    /// Elementwise Hermiticity of a density matrix.
    pub const HERMITIAN: f64 = 1e-12;
    /// Hermiticity accepted by the eigensolver entry points.
    pub const HERMITIAN_LOOSE: f64 = 1e-10;
    /// Trace of a density matrix.
    pub const TRACE: f64 = 1e-10;
    /// Most negative eigenvalue accepted for a density matrix.
    pub const PSD: f64 = 1e-10;
    /// `u†u = 1` check.
    pub const UNITARY: f64 = 1e-10;
    /// Eigenvalues closer than this to zero count as zero.
    pub const ZERO_EIGENVALUE: f64 = 1e-12;
    /// Branches with smaller probability are treated as impossible.
    pub const ZERO_PROBABILITY: f64 = 1e-12;
}

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn is_power_of_two_len(len: usize) -> Option<usize> {
    if len.is_power_of_two() {
        Some(len.trailing_zeros() as usize)
    } else {
        None
    }
}

/// Bit position of qubit `q` inside a basis index of an `n`-qubit register.
#[inline]
pub(crate) fn shift(n: usize, q: usize) -> usize {
    n - 1 - q
}

/// Maximum elementwise deviation of `u†u` from the identity.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let prod = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - c(target, 0.0)).norm());
        }
    }
    worst
}

/// Maximum elementwise deviation of `m` from `m†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Kronecker product with `a` acting on the leading qubits.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Haar-random unitary on `n_qubits` (QR of a complex Ginibre matrix with the
/// diagonal phases of `R` divided out).
pub fn random_unitary<R: rand::Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> CMatrix {
    use rand_distr::StandardNormal;
    let d = 1usize << n_qubits;
    let g = CMatrix::from_fn(d, d, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..d {
        let z = r[(k, k)];
        let phase = if z.norm() > 0.0 {
            z / z.norm()
        } else {
            c(1.0, 0.0)
        };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

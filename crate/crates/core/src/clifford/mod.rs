//! Reverse-cloning unitary, CNOT synthesis, Pauli-frame algebra and the
//! outcome→correction maps used by the remote protocols.

mod cnot;
mod pauli;

use serde::{Deserialize, Serialize};

pub use cnot::{
    decompose_to_cnots, matrix_permutation, permutation_matrix, Cnot, CnotCircuit, MAX_CNOT_DEPTH,
};
pub use pauli::{pauli_product, PauliKind, PauliOp, PauliString, Phase};

use crate::error::{Error, Result};
use crate::qmath::{c, tol, unitarity_defect, BellOutcome, CMatrix, PureState, C64};

/// Column `k` of the reverse-cloning unitary has its single 1 in row
/// `REVERSE_CLONE_IMAGE[k]`.
pub const REVERSE_CLONE_IMAGE: [usize; 8] = [0, 6, 5, 3, 7, 1, 2, 4];

/// Tolerance for recognising a conjugated operator as a Pauli string.
pub const PAULI_TOL: f64 = 1e-10;

/// The 8×8 reverse-cloning permutation `U_r`, taking the optimal cloning state
/// of `|φ⟩` to `|φ⟩ ⊗ √(2/3)(|00⟩ + (|01⟩+|10⟩)/2)`.
pub fn u_reverse_clone() -> CMatrix {
    permutation_matrix(&REVERSE_CLONE_IMAGE)
}

/// Bell outcomes of Alice, Bob and Charlie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OutcomeTriple {
    pub alice: BellOutcome,
    pub bob: BellOutcome,
    pub charlie: BellOutcome,
}

impl OutcomeTriple {
    pub fn new(alice: BellOutcome, bob: BellOutcome, charlie: BellOutcome) -> Self {
        OutcomeTriple {
            alice,
            bob,
            charlie,
        }
    }

    pub fn from_indices(a: usize, b: usize, c: usize) -> Result<Self> {
        Ok(OutcomeTriple::new(
            BellOutcome::new(a)?,
            BellOutcome::new(b)?,
            BellOutcome::new(c)?,
        ))
    }

    /// All 64 triples, lexicographic.
    pub fn all() -> impl Iterator<Item = OutcomeTriple> {
        BellOutcome::ALL.into_iter().flat_map(|a| {
            BellOutcome::ALL.into_iter().flat_map(move |b| {
                BellOutcome::ALL
                    .into_iter()
                    .map(move |c| OutcomeTriple::new(a, b, c))
            })
        })
    }

    pub fn as_array(&self) -> [BellOutcome; 3] {
        [self.alice, self.bob, self.charlie]
    }
}

/// `σ_a σ_b σ_c` for outcomes `(a, b, c)`, with `σ0 = 1, σ1 = σ_z, σ2 = σ_x, σ3 = σ_z σ_x`.
pub fn correction_for_outcomes(o: OutcomeTriple) -> PauliOp {
    let ops = o.as_array().map(PauliOp::from_outcome);
    pauli_product(&ops)
}

fn in_low_pair(o: BellOutcome) -> bool {
    o.index() <= 1
}

/// Correction for concentrating the repetition-code state: the plain product,
/// followed by an extra `σ_x` when exactly one of Bob's and Charlie's outcomes
/// lies in `{Φ0, Φ1}`.
pub fn ec_correction_for_outcomes(o: OutcomeTriple) -> PauliOp {
    let base = correction_for_outcomes(o);
    if in_low_pair(o.bob) != in_low_pair(o.charlie) {
        pauli_product(&[base, PauliOp::new(PauliKind::X)])
    } else {
        base
    }
}

fn qubits_of(u: &CMatrix) -> Result<usize> {
    let d = u.nrows();
    if u.ncols() != d || !d.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: d.next_power_of_two(),
            found: u.ncols(),
        });
    }
    Ok(d.trailing_zeros() as usize)
}

/// `(1/√d) Σ_k |k⟩ ⊗ U|k⟩`: input ports first, output ports after.
pub fn remote_op_channel(u: &CMatrix) -> Result<PureState> {
    let m = qubits_of(u)?;
    let defect = unitarity_defect(u);
    if defect > tol::UNITARY {
        return Err(Error::NotUnitary(defect));
    }
    let d = 1usize << m;
    let norm = c(1.0 / (d as f64).sqrt(), 0.0);
    let mut amps = vec![C64::default(); d * d];
    for k in 0..d {
        for j in 0..d {
            amps[(k << m) | j] = u[(j, k)] * norm;
        }
    }
    PureState::new(amps)
}

/// True when conjugation by `u` maps every single-qubit `σ_x` and `σ_z` to a Pauli string.
pub fn is_clifford(u: &CMatrix) -> Result<bool> {
    let n = qubits_of(u)?;
    let defect = unitarity_defect(u);
    if defect > tol::UNITARY {
        return Err(Error::NotUnitary(defect));
    }
    for q in 0..n {
        for kind in [PauliKind::X, PauliKind::Z] {
            let mut kinds = vec![PauliKind::I; n];
            kinds[q] = kind;
            let conj = u * PauliString::new(kinds).matrix() * u.adjoint();
            if PauliString::from_matrix(&conj, PAULI_TOL).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Returns `p'` with `u·p = p'·u`, i.e. `p' = u p u†`.
pub fn propagate_pauli(u: &CMatrix, p: &PauliString) -> Result<PauliString> {
    let n = qubits_of(u)?;
    if p.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.n_qubits(),
        });
    }
    if !is_clifford(u)? {
        return Err(Error::NotClifford);
    }
    let conj = u * p.matrix() * u.adjoint();
    PauliString::from_matrix(&conj, PAULI_TOL).ok_or(Error::NotClifford)
}

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qmath::{c, kron, BellOutcome, CMatrix, C64};

/// Single-qubit Pauli operator modulo phase: `1`, `σ_z`, `σ_x` or `σ_z·σ_x`.
///
/// `σ_z·σ_x = [[0, 1], [−1, 0]]`, which is `i·σ_y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliKind {
    I,
    Z,
    X,
    ZX,
}

impl PauliKind {
    pub const ALL: [PauliKind; 4] = [PauliKind::I, PauliKind::Z, PauliKind::X, PauliKind::ZX];

    /// Exponents `(z, x)` in `σ_z^z σ_x^x`.
    pub fn bits(self) -> (u8, u8) {
        match self {
            PauliKind::I => (0, 0),
            PauliKind::Z => (1, 0),
            PauliKind::X => (0, 1),
            PauliKind::ZX => (1, 1),
        }
    }

    pub fn from_bits(z: u8, x: u8) -> Self {
        match (z & 1, x & 1) {
            (0, 0) => PauliKind::I,
            (1, 0) => PauliKind::Z,
            (0, 1) => PauliKind::X,
            _ => PauliKind::ZX,
        }
    }

    /// `σ_i` associated with Bell outcome `Φ^i`.
    pub fn from_outcome(o: BellOutcome) -> Self {
        PauliKind::ALL[o.index()]
    }

    pub fn matrix(self) -> CMatrix {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        let entries = match self {
            PauliKind::I => [o, z, z, o],
            PauliKind::Z => [o, z, z, -o],
            PauliKind::X => [z, o, o, z],
            PauliKind::ZX => [z, o, -o, z],
        };
        CMatrix::from_row_slice(2, 2, &entries)
    }
}

impl fmt::Display for PauliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PauliKind::I => "I",
            PauliKind::Z => "Z",
            PauliKind::X => "X",
            PauliKind::ZX => "ZX",
        })
    }
}

/// Global phase `i^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u8) -> Self {
        Phase(k % 4)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn value(self) -> C64 {
        match self.0 {
            0 => c(1.0, 0.0),
            1 => c(0.0, 1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, -1.0),
        }
    }

    /// Nearest power of `i` to `z`, if within `tol`.
    pub fn from_value(z: C64, tol: f64) -> Option<Self> {
        (0..4).map(Phase).find(|p| (p.value() - z).norm() <= tol)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+1", "+i", "-1", "-i"][self.0 as usize])
    }
}

/// Element of the single-qubit Pauli group with explicit phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliOp {
    pub kind: PauliKind,
    pub phase: Phase,
}

impl PauliOp {
    pub const IDENTITY: PauliOp = PauliOp::new(PauliKind::I);

    pub const fn new(kind: PauliKind) -> Self {
        PauliOp {
            kind,
            phase: Phase::ONE,
        }
    }

    pub fn from_outcome(o: BellOutcome) -> Self {
        PauliOp::new(PauliKind::from_outcome(o))
    }

    pub fn matrix(&self) -> CMatrix {
        self.kind.matrix() * self.phase.value()
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase == Phase::ONE {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "({}){}", self.phase, self.kind)
        }
    }
}

/// Ordered matrix product `ops[0]·ops[1]·…`, reduced to `{I, Z, X, ZX}` with phase.
pub fn pauli_product(ops: &[PauliOp]) -> PauliOp {
    ops.iter().fold(PauliOp::IDENTITY, |acc, op| {
        let (z1, x1) = acc.kind.bits();
        let (z2, x2) = op.kind.bits();
        // σ_x σ_z = −σ_z σ_x
        let swap_sign = if x1 & z2 == 1 {
            Phase::MINUS_ONE
        } else {
            Phase::ONE
        };
        PauliOp {
            kind: PauliKind::from_bits(z1 ^ z2, x1 ^ x2),
            phase: acc.phase * op.phase * swap_sign,
        }
    })
}

/// Tensor product of single-qubit Paulis with one overall phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    pub kinds: Vec<PauliKind>,
    pub phase: Phase,
}

impl PauliString {
    pub fn new(kinds: Vec<PauliKind>) -> Self {
        PauliString {
            kinds,
            phase: Phase::ONE,
        }
    }

    /// `σ_{o1} ⊗ σ_{o2} ⊗ …`.
    pub fn from_outcomes(outcomes: &[BellOutcome]) -> Self {
        PauliString::new(
            outcomes
                .iter()
                .map(|&o| PauliKind::from_outcome(o))
                .collect(),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.kinds.len()
    }

    pub fn matrix(&self) -> CMatrix {
        let base = self
            .kinds
            .iter()
            .fold(CMatrix::identity(1, 1), |acc, k| kron(&acc, &k.matrix()));
        base * self.phase.value()
    }

    /// Expresses `m` as `phase · P₁⊗…⊗P_n` if it is one, checked to `tol`.
    pub fn from_matrix(m: &CMatrix, tol: f64) -> Option<PauliString> {
        let dim = m.nrows();
        if !dim.is_power_of_two() || m.ncols() != dim {
            return None;
        }
        let n = dim.trailing_zeros() as usize;
        for code in 0..(1usize << (2 * n)) {
            let kinds: Vec<PauliKind> = (0..n)
                .map(|q| PauliKind::ALL[(code >> (2 * (n - 1 - q))) & 3])
                .collect();
            let candidate = PauliString::new(kinds);
            let basis = candidate.matrix();
            let overlap = (basis.adjoint() * m).trace() / c(dim as f64, 0.0);
            if overlap.norm() < 0.5 {
                continue;
            }
            let phase = Phase::from_value(overlap, tol)?;
            let out = PauliString { phase, ..candidate };
            let residual = (out.matrix() - m)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            return (residual <= tol).then_some(out);
        }
        None
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != Phase::ONE {
            write!(f, "({})", self.phase)?;
        }
        let parts: Vec<String> = self.kinds.iter().map(|k| k.to_string()).collect();
        f.write_str(&parts.join("⊗"))
    }
}

use super::{
    c, shift, tol, unitarity_defect, CMatrix, DensityMatrix, PureState, QubitSubset, StateRef, C64,
};
use crate::error::{Error, Result};

/// Places the bits of `value` (MSB first) onto the register positions of `qubits`.
#[inline]
pub(crate) fn spread(n: usize, qubits: &[usize], value: usize) -> usize {
    let m = qubits.len();
    qubits.iter().enumerate().fold(0, |acc, (pos, &q)| {
        acc | (((value >> (m - 1 - pos)) & 1) << shift(n, q))
    })
}

/// `|a⟩ ⊗ |b⟩`, with the qubits of `a` first.
pub fn tensor(a: &PureState, b: &PureState) -> PureState {
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for x in a.amps() {
        amps.extend(b.amps().iter().map(|y| x * y));
    }
    PureState::from_raw(a.n_qubits() + b.n_qubits(), amps)
}

/// Applies `u` to `targets`; `targets[0]` is the most significant qubit of `u`'s index.
pub fn apply_unitary(s: &PureState, u: &CMatrix, targets: &[usize]) -> Result<PureState> {
    let subset = QubitSubset::new(targets.to_vec(), s.n_qubits())?;
    let dim = 1usize << subset.len();
    if u.nrows() != dim || u.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.nrows().max(u.ncols()),
        });
    }
    let defect = unitarity_defect(u);
    if defect > tol::UNITARY {
        return Err(Error::NotUnitary(defect));
    }
    Ok(apply_unchecked(s, u, targets))
}

fn apply_unchecked(s: &PureState, u: &CMatrix, targets: &[usize]) -> PureState {
    let n = s.n_qubits();
    let m = targets.len();
    let dim = 1usize << m;
    let offsets: Vec<usize> = (0..dim).map(|j| spread(n, targets, j)).collect();
    let mask = offsets[dim - 1];
    let old = s.amps();
    let mut out = vec![C64::default(); old.len()];
    let mut local = vec![C64::default(); dim];
    for base in (0..old.len()).filter(|k| k & mask == 0) {
        for (j, off) in offsets.iter().enumerate() {
            local[j] = old[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            out[base | off] = (0..dim).map(|col| u[(r, col)] * local[col]).sum();
        }
    }
    PureState::from_raw(n, out)
}

/// Reduced state on `keep`, in the order given.
pub fn partial_trace<'a>(state: impl Into<StateRef<'a>>, keep: &[usize]) -> Result<DensityMatrix> {
    let state = state.into();
    let n = state.n_qubits();
    if keep.is_empty() {
        return Err(Error::InvalidSubset(
            "partial trace must keep at least one qubit".into(),
        ));
    }
    let kept = QubitSubset::new(keep.to_vec(), n)?;
    let traced = kept.complement(n);
    let dk = 1usize << kept.len();
    let dt = 1usize << traced.len();
    let kept_off: Vec<usize> = (0..dk).map(|i| spread(n, kept.indices(), i)).collect();
    let traced_off: Vec<usize> = (0..dt).map(|r| spread(n, traced.indices(), r)).collect();

    let mut out = CMatrix::zeros(dk, dk);
    match state {
        StateRef::Pure(s) => {
            let a = s.amps();
            for i in 0..dk {
                for j in i..dk {
                    let v: C64 = traced_off
                        .iter()
                        .map(|t| a[kept_off[i] | t] * a[kept_off[j] | t].conj())
                        .sum();
                    out[(i, j)] = v;
                    out[(j, i)] = v.conj();
                }
            }
        }
        StateRef::Mixed(rho) => {
            let m = rho.matrix();
            for i in 0..dk {
                for j in 0..dk {
                    out[(i, j)] = traced_off
                        .iter()
                        .map(|t| m[(kept_off[i] | t, kept_off[j] | t)])
                        .sum();
                }
            }
        }
    }
    Ok(DensityMatrix::from_raw(kept.len(), out))
}

/// Partial transpose of a density matrix on `subset`. The result is Hermitian
/// with unit trace but need not be positive.
pub fn partial_transpose(rho: &DensityMatrix, subset: &[usize]) -> Result<CMatrix> {
    partial_transpose_matrix(rho.matrix(), rho.n_qubits(), subset)
}

/// Partial transpose of an arbitrary `2^n × 2^n` matrix.
pub fn partial_transpose_matrix(m: &CMatrix, n_qubits: usize, subset: &[usize]) -> Result<CMatrix> {
    let dim = 1usize << n_qubits;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.nrows(),
        });
    }
    let subset = QubitSubset::new(subset.to_vec(), n_qubits)?;
    let mask = spread(n_qubits, subset.indices(), (1 << subset.len()) - 1);
    let mut out = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let swap = (i ^ j) & mask;
            out[(i ^ swap, j ^ swap)] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Removes coherences between computational basis states of `qubits`.
pub fn dephase(rho: &DensityMatrix, qubits: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    let subset = QubitSubset::new(qubits.to_vec(), n)?;
    let mask = spread(n, subset.indices(), (1 << subset.len()) - 1);
    let mut out = rho.matrix().clone();
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            if (i ^ j) & mask != 0 {
                out[(i, j)] = c(0.0, 0.0);
            }
        }
    }
    Ok(DensityMatrix::from_raw(n, out))
}

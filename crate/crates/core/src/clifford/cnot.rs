use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{c, CMatrix};

/// Longest CNOT word searched by [`decompose_to_cnots`].
pub const MAX_CNOT_DEPTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cnot {
    pub control: usize,
    pub target: usize,
}

impl Cnot {
    /// Basis permutation of this gate on `n` qubits (qubit 0 most significant).
    fn apply_bits(self, n: usize, x: usize) -> usize {
        let cbit = (x >> (n - 1 - self.control)) & 1;
        x ^ (cbit << (n - 1 - self.target))
    }
}

/// CNOT gates applied in order: `gates[0]` acts first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnotCircuit {
    pub n_qubits: usize,
    pub gates: Vec<Cnot>,
}

impl CnotCircuit {
    pub fn new(n_qubits: usize, gates: Vec<Cnot>) -> Result<Self> {
        for g in &gates {
            if g.control == g.target {
                return Err(Error::InvalidSubset(format!(
                    "CNOT control equals target ({})",
                    g.control
                )));
            }
            if g.control >= n_qubits || g.target >= n_qubits {
                return Err(Error::InvalidSubset(format!(
                    "CNOT({}→{}) out of range for {n_qubits} qubits",
                    g.control, g.target
                )));
            }
        }
        Ok(CnotCircuit { n_qubits, gates })
    }

    /// `perm[x]` is the basis state that `|x⟩` is sent to.
    pub fn permutation(&self) -> Vec<usize> {
        (0..1usize << self.n_qubits)
            .map(|x| {
                self.gates
                    .iter()
                    .fold(x, |acc, g| g.apply_bits(self.n_qubits, acc))
            })
            .collect()
    }

    /// Gate product `G_k ⋯ G_1`.
    pub fn matrix(&self) -> CMatrix {
        permutation_matrix(&self.permutation())
    }
}

/// 0/1 matrix with a one at `(perm[x], x)`.
pub fn permutation_matrix(perm: &[usize]) -> CMatrix {
    let d = perm.len();
    let mut m = CMatrix::zeros(d, d);
    for (col, &row) in perm.iter().enumerate() {
        m[(row, col)] = c(1.0, 0.0);
    }
    m
}

/// Reads a permutation out of an exact 0/1 matrix.
pub fn matrix_permutation(u: &CMatrix) -> Result<Vec<usize>> {
    let d = u.nrows();
    if u.ncols() != d {
        return Err(Error::NotPermutation);
    }
    let mut perm = vec![usize::MAX; d];
    let mut seen = vec![false; d];
    for col in 0..d {
        for row in 0..d {
            let z = u[(row, col)];
            if z == c(1.0, 0.0) {
                if perm[col] != usize::MAX || seen[row] {
                    return Err(Error::NotPermutation);
                }
                perm[col] = row;
                seen[row] = true;
            } else if z != c(0.0, 0.0) {
                return Err(Error::NotPermutation);
            }
        }
        if perm[col] == usize::MAX {
            return Err(Error::NotPermutation);
        }
    }
    Ok(perm)
}

/// Breadth-first search for the shortest CNOT word whose product is `u`.
///
/// Gates are expanded in lexicographic `(control, target)` order, so the
/// result is deterministic.
pub fn decompose_to_cnots(u: &CMatrix) -> Result<CnotCircuit> {
    let goal = matrix_permutation(u)?;
    let d = goal.len();
    if !d.is_power_of_two() {
        return Err(Error::NotPermutation);
    }
    let n = d.trailing_zeros() as usize;
    let moves: Vec<Cnot> = (0..n)
        .flat_map(|control| {
            (0..n)
                .filter(move |&t| t != control)
                .map(move |target| Cnot { control, target })
        })
        .collect();

    let start: Vec<usize> = (0..d).collect();
    let mut parent: HashMap<Vec<usize>, Option<(Vec<usize>, Cnot)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut frontier = VecDeque::from([(start, 0usize)]);

    while let Some((perm, depth)) = frontier.pop_front() {
        if perm == goal {
            let mut gates = Vec::with_capacity(depth);
            let mut cur = perm;
            while let Some(Some((prev, g))) = parent.get(&cur) {
                gates.push(*g);
                cur = prev.clone();
            }
            gates.reverse();
            return CnotCircuit::new(n, gates);
        }
        if depth == MAX_CNOT_DEPTH {
            continue;
        }
        for &g in &moves {
            let next: Vec<usize> = perm.iter().map(|&x| g.apply_bits(n, x)).collect();
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((perm.clone(), g)));
                frontier.push_back((next, depth + 1));
            }
        }
    }
    Err(Error::NotCnotDecomposable(MAX_CNOT_DEPTH))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_is_empty_circuit() {
        let circuit = decompose_to_cnots(&CMatrix::identity(8, 8)).unwrap();
        assert!(circuit.gates.is_empty());
    }

    #[test]
    fn single_cnot_is_recovered() {
        let g = CnotCircuit::new(
            3,
            vec![Cnot {
                control: 0,
                target: 1,
            }],
        )
        .unwrap();
        let found = decompose_to_cnots(&g.matrix()).unwrap();
        assert_eq!(found, g);
        // CNOT(0→1) sends |100⟩ to |110⟩
        assert_eq!(g.permutation()[0b100], 0b110);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(CnotCircuit::new(
            3,
            vec![Cnot {
                control: 0,
                target: 0
            }]
        )
        .is_err());
        // X on qubit 0 is an affine permutation, not a CNOT word.
        let x0: Vec<usize> = (0..8).map(|k| k ^ 0b100).collect();
        assert_eq!(
            decompose_to_cnots(&permutation_matrix(&x0)),
            Err(Error::NotCnotDecomposable(MAX_CNOT_DEPTH))
        );
        let mut not_perm = CMatrix::identity(8, 8);
        not_perm[(0, 0)] = c(0.5, 0.0);
        assert_eq!(decompose_to_cnots(&not_perm), Err(Error::NotPermutation));
    }

    proptest! {
        #[test]
        fn round_trip_on_random_words(raw in proptest::collection::vec((0usize..3, 1usize..3), 0..=8)) {
            let gates: Vec<Cnot> = raw
                .into_iter()
                .map(|(control, off)| Cnot { control, target: (control + off) % 3 })
                .collect();
            let word = CnotCircuit::new(3, gates).unwrap();
            let found = decompose_to_cnots(&word.matrix()).unwrap();
            prop_assert!(found.gates.len() <= word.gates.len());
            prop_assert_eq!(found.matrix(), word.matrix());
        }
    }
}

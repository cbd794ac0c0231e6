use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{c, hermiticity_defect, is_power_of_two_len, tol, CMatrix, C64};
use crate::error::{Error, Result};

/// Normalized amplitude vector over `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl PureState {
    /// Wraps an amplitude vector, rejecting bad lengths and norms off by more
    /// than [`tol::NORM`].
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let n_qubits = is_power_of_two_len(amps.len()).ok_or(Error::NotPowerOfTwo(amps.len()))?;
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(PureState { n_qubits, amps })
    }

    /// Rescales `amps` to unit norm. Fails on a zero vector.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let n_qubits = is_power_of_two_len(amps.len()).ok_or(Error::NotPowerOfTwo(amps.len()))?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::NotNormalized(0.0));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(PureState { n_qubits, amps })
    }

    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        PureState { n_qubits, amps }
    }

    /// Computational basis state `|k⟩` on `n` qubits.
    pub fn basis(n_qubits: usize, k: usize) -> Self {
        let mut amps = vec![C64::default(); 1 << n_qubits];
        amps[k] = c(1.0, 0.0);
        PureState { n_qubits, amps }
    }

    /// The zero-qubit state, the unit of [`tensor`](super::tensor).
    pub fn vacuum() -> Self {
        PureState {
            n_qubits: 0,
            amps: vec![c(1.0, 0.0)],
        }
    }

    /// `α|0⟩ + β|1⟩`.
    pub fn qubit(alpha: C64, beta: C64) -> Result<Self> {
        PureState::new(vec![alpha, beta])
    }

    /// Haar-distributed state drawn from complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> Self {
        let amps: Vec<C64> = (0..1usize << n_qubits)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        PureState::normalized(amps).expect("Gaussian vector is almost surely nonzero")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amp(&self, k: usize) -> C64 {
        self.amps[k]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Multiplies every amplitude by a unit-modulus scalar.
    pub fn with_phase(&self, phase: C64) -> Self {
        PureState {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }

    pub fn to_vector(&self) -> nalgebra::DVector<C64> {
        nalgebra::DVector::from_column_slice(&self.amps)
    }

    pub fn to_density(&self) -> DensityMatrix {
        let v = self.to_vector();
        DensityMatrix::from_raw(self.n_qubits, &v * v.adjoint())
    }
}

/// Hermitian, positive, unit-trace matrix over `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::InvalidDensityMatrix(format!(
                "not square ({}x{})",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let n_qubits = is_power_of_two_len(mat.nrows()).ok_or(Error::NotPowerOfTwo(mat.nrows()))?;
        let herm = hermiticity_defect(&mat);
        if herm > tol::HERMITIAN {
            return Err(Error::NotHermitian(herm));
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > tol::TRACE || trace.im.abs() > tol::TRACE {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace}")));
        }
        let min = super::min_eigenvalue(&mat)?;
        if min < -tol::PSD {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(DensityMatrix { n_qubits, mat })
    }

    pub(crate) fn from_raw(n_qubits: usize, mat: CMatrix) -> Self {
        debug_assert_eq!(mat.nrows(), 1 << n_qubits);
        DensityMatrix { n_qubits, mat }
    }

    /// `1/2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        DensityMatrix::from_raw(n_qubits, CMatrix::identity(d, d) / c(d as f64, 0.0))
    }

    /// Convex combination `Σ w_i |s_i⟩⟨s_i|`. Weights must sum to one.
    pub fn mixture(weighted: &[(f64, PureState)]) -> Result<Self> {
        let first = weighted
            .first()
            .ok_or_else(|| Error::InvalidDensityMatrix("empty mixture".into()))?;
        let n = first.1.n_qubits();
        let d = 1usize << n;
        let mut mat = CMatrix::zeros(d, d);
        for (w, s) in weighted {
            if s.n_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: s.dim(),
                });
            }
            mat += s.to_density().mat * c(*w, 0.0);
        }
        DensityMatrix::new(mat)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        super::hermitian_eigen(&self.mat).0
    }

    /// Largest elementwise distance to `other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Either kind of state, borrowed.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

impl StateRef<'_> {
    pub fn n_qubits(&self) -> usize {
        match self {
            StateRef::Pure(s) => s.n_qubits(),
            StateRef::Mixed(r) => r.n_qubits(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            StateRef::Pure(s) => s.to_density(),
            StateRef::Mixed(r) => (*r).clone(),
        }
    }
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(s: &'a PureState) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(r: &'a DensityMatrix) -> Self {
        StateRef::Mixed(r)
    }
}

/// Ordered, duplicate-free list of qubit indices valid for a register.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitSubset(Vec<usize>);

impl QubitSubset {
    pub fn new(indices: Vec<usize>, n_qubits: usize) -> Result<Self> {
        for (pos, &q) in indices.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::InvalidSubset(format!(
                    "qubit {q} out of range for {n_qubits} qubits"
                )));
            }
            if indices[..pos].contains(&q) {
                return Err(Error::InvalidSubset(format!("qubit {q} repeated")));
            }
        }
        Ok(QubitSubset(indices))
    }

    /// Indices of `0..n_qubits` not in `self`, ascending.
    pub fn complement(&self, n_qubits: usize) -> QubitSubset {
        QubitSubset((0..n_qubits).filter(|q| !self.0.contains(q)).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0.contains(&q)
    }
}

/// Which of the four Bell states `Φ^0..Φ^3` a joint measurement selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct BellOutcome(u8);

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome(0),
        BellOutcome(1),
        BellOutcome(2),
        BellOutcome(3),
    ];

    pub fn new(index: usize) -> Result<Self> {
        if index < 4 {
            Ok(BellOutcome(index as u8))
        } else {
            Err(Error::InvalidOutcome(index))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl TryFrom<u8> for BellOutcome {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        BellOutcome::new(v as usize)
    }
}

impl From<BellOutcome> for u8 {
    fn from(o: BellOutcome) -> u8 {
        o.0
    }
}

impl std::fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Φ{}", self.0)
    }
}

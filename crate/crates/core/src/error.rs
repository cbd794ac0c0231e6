use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude vector of length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),

    #[error("Bell outcome index {0} is out of range 0..=3")]
    InvalidOutcome(usize),

    #[error("inconsistent outcome: Bell branch {outcome} has probability {probability:e}")]
    InconsistentOutcome { outcome: u8, probability: f64 },

    #[error("not CNOT-decomposable within {0} gates")]
    NotCnotDecomposable(usize),

    #[error("matrix is not a 0/1 permutation matrix")]
    NotPermutation,

    #[error("unitary is not Clifford: conjugated Pauli leaves the Pauli group")]
    NotClifford,

    #[error("operation on qubits {0} and {1} would act across parties")]
    NonLocalOperation(String, String),

    #[error("unknown qubit label {0}")]
    UnknownQubit(String),

    #[error("input has no overlap with the reference family: {0}")]
    NoReference(String),
}

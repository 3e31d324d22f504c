use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("amplitude vector of length {len} is not 2^n for n >= 1")]
    BadLength { len: usize },
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("qubit index {index} out of range 1..={n_qubits}")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("duplicate qubit index {index}")]
    DuplicateQubit { index: usize },
    #[error("empty qubit selection")]
    EmptySelection,
    #[error("probability vector sums to {sum}")]
    BadProbabilities { sum: f64 },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("fragment contains the system qubit")]
    FragmentContainsSystem,
    #[error("order is not a permutation of the environment qubits")]
    NotAPermutation,
    #[error("incomplete tomography dataset: {reason}")]
    IncompleteDataset { reason: String },
    #[error("discord {value:e} is below -1e-4; Holevo optimisation is inconsistent")]
    NegativeDiscord { value: f64 },
    #[error("operation requires a non-empty ensemble")]
    EmptyEnsemble,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors raised by numerical post-conditions rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NegativeDiscord { .. })
    }
}

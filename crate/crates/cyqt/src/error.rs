//! Crate-wide error type.

use crate::bell::BellOutcome;
use crate::statevec::MAX_QUBITS;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("qubit count {0} outside the supported range 1..={MAX_QUBITS}")]
    Capacity(usize),

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("gate targets must be distinct (both are {0})")]
    DuplicateTargets(usize),

    #[error("state dimension mismatch: {0} vs {1} qubits")]
    DimensionMismatch(usize, usize),

    #[error("state is not normalized: |Σ|amp|² − 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),

    #[error("label map: {0}")]
    LabelMap(String),

    #[error("forced outcome {outcome} at step {step} has zero probability")]
    BranchImpossible { step: usize, outcome: BellOutcome },

    #[error("correction derivation failed for tuple {tuple}: {reason}")]
    DerivationFailure { tuple: String, reason: String },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("scan resolution must be at least 2 (got {0})")]
    BadResolution(usize),

    #[error("cannot parse {0:?} as a complex amplitude (expected e.g. \"0.6+0.8i\")")]
    BadComplex(String),

    #[error("cannot parse {0:?} as a Bell outcome (expected Phi+, Phi-, Psi+ or Psi-)")]
    BadOutcome(String),

    #[error("cannot parse {0:?} as a Pauli operator (expected I, X, iY or Z)")]
    BadPauli(String),

    #[error("table import: {0}")]
    TableImport(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

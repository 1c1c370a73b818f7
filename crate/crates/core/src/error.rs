use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate value {value} in dataset")]
    DuplicateValue { value: u64 },

    #[error("value {value} does not fit in {n_qubits} qubits")]
    ValueOutOfRange { value: u64, n_qubits: u32 },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{n_qubits} qubits exceeds the engine limit of {limit}")]
    QubitLimitExceeded { n_qubits: u32, limit: u32 },

    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: u32, found: u32 },

    #[error("invalid counts: marked={marked}, size={size}")]
    InvalidCounts { marked: u64, size: u64 },

    #[error("phase-matching argument exceeds 1 for t={t}, M={m_est}, N={n_est}")]
    PhaseDomain { t: u64, m_est: u64, n_est: u64 },

    #[error("threshold {d_prime} marks every code of a {n_qubits}-qubit register")]
    ThresholdIsFullRange { d_prime: u64, n_qubits: u32 },

    #[error("threshold {d_prime} is outside a {n_qubits}-qubit register")]
    ThresholdOutOfRange { d_prime: u64, n_qubits: u32 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid range {from}..={to}")]
    InvalidRange { from: u32, to: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name, used in structured CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicateValue { .. } => "DuplicateValue",
            Error::ValueOutOfRange { .. } => "ValueOutOfRange",
            Error::EmptyDataset => "EmptyDataset",
            Error::Parse(_) => "ParseError",
            Error::QubitLimitExceeded { .. } => "QubitLimitExceeded",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidCounts { .. } => "InvalidCounts",
            Error::PhaseDomain { .. } => "PhaseDomainError",
            Error::ThresholdIsFullRange { .. } => "ThresholdIsFullRange",
            Error::ThresholdOutOfRange { .. } => "ThresholdOutOfRange",
            Error::InvalidParams(_) => "InvalidParams",
            Error::InvalidRange { .. } => "InvalidRange",
            Error::Io(_) => "Io",
        }
    }
}

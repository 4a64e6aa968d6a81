use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("pauli strings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("qubit count mismatch: polynomial has {poly}, topology has {topology}")]
    QubitCountMismatch { poly: usize, topology: usize },

    #[error("topology is not connected")]
    Disconnected,

    #[error("self-loop on qubit {0}")]
    SelfLoop(usize),

    #[error("qubit {0} is not in the active set")]
    Inactive(usize),

    #[error("steiner tree requested for an empty terminal set")]
    NoTerminals,

    #[error("cnot control and target are both {0}")]
    DegenerateCnot(usize),

    #[error("tableau is not symplectic")]
    NotSymplectic,

    #[error("dense verification is limited to {max} qubits, got {requested}")]
    TooManyQubits { requested: usize, max: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

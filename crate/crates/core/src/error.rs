use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported representation spec: {0}")]
    UnsupportedSpec(String),

    /// A freshly built representation failed one of its structural checks.
    /// This is an internal bug, never a user error.
    #[error("representation construction failed: {0}")]
    ConstructionFailure(String),

    #[error("joint kernel of the raising operators has dimension {0}, expected 1")]
    DegenerateKernel(usize),

    #[error("{0} is not available for this representation family")]
    Unsupported(String),

    #[error(
        "Casimir eigenvalues {lower} and {upper} are separated by {gap:e}, \
         which is within 10x the clustering tolerance {tol:e}"
    )]
    ClusterAmbiguity {
        lower: f64,
        upper: f64,
        gap: f64,
        tol: f64,
    },

    #[error("operator is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("operators are expressed in different bases ({0:?} vs {1:?})")]
    BasisMismatch(crate::choi::BasisTag, crate::choi::BasisTag),

    #[error("symmetric square is not V(2λ₀) ⊕ V(0); complement rank is {complement_rank}")]
    NotAdmissible { complement_rank: usize },

    #[error("rescaled Kraus operator is not unitary (‖T†T − I‖ = {deviation:e})")]
    RescaleFailure { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

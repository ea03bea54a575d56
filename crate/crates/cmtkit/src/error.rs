use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NonHermitian(f64),
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid projector: {0}")]
    InvalidProjector(String),
    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("rank {rank} out of range for dimension {dim}")]
    RankOutOfRange { rank: usize, dim: usize },
    #[error("blocks do not form a resolution of the identity: {0}")]
    NotAResolution(String),
    #[error("operator is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("unknown theorem id `{0}`")]
    UnknownTheoremId(String),
    #[error("scenario mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("Jordan decomposition failed: {0}")]
    DecompositionFailure(String),
    #[error("Bloch axes are antipodal; reflection axis undefined")]
    AntipodalAxes,
    #[error("incomplete measurement: {0}")]
    IncompleteMeasurement(String),
    #[error("Bob's measurement for input {0} is not projective")]
    NonProjectiveBob(usize),
    #[error("only uniform input distributions are supported")]
    NonUniformDistribution,
    #[error("target not reachable: {0}")]
    Unreachable(String),
    #[error("numeric overflow: {0}")]
    Overflow(String),
    #[error("unknown figure `{0}`")]
    UnknownFigure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(msg: impl Into<String>) -> Error {
    Error::ParamOutOfRange(msg.into())
}

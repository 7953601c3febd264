use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("instance too large: dimension {dim} exceeds cap {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("unfactorized operator: an (n, k) tag is required")]
    Unfactorized,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no symplectic form of this type: {0}")]
    NoSymplecticForm(String),
    #[error("basis not independent: {0}")]
    BasisNotIndependent(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("routing error: {0}")]
    Routing(String),
    #[error("unknown experiment: {0}")]
    UnknownExperiment(String),
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

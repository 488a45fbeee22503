use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("mixed scalar kinds: {0}")]
    MixedScalarKinds(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("inhomogeneous degree: {0}")]
    Inhomogeneous(String),
    #[error("differential does not square to zero: {0}")]
    NotAComplex(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("missing unit data: {0}")]
    MissingUnits(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

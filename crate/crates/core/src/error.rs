use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error("point index {index} out of range for a carrier of {len} points")]
    PointOutOfRange { index: usize, len: usize },
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("not an equivalence relation: {0}")]
    NotEquivalence(String),
    #[error("invalid pseudometric: {0}")]
    InvalidPseudometric(String),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Violations(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

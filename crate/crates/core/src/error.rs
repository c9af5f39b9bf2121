use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {0} is outside the supported range 1..={max}", max = crate::lattice::MAX_DIM)]
    Dimension(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("points {a} and {b} are not nearest neighbours")]
    NotAdjacent { a: String, b: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("region must be finite for this operation")]
    InfiniteRegion,

    #[error("point {0} lies outside the region")]
    OutsideRegion(String),

    #[error("regions overlap")]
    Overlap,

    #[error("no path inside the region connects the terminals")]
    Disconnected,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("simulation domain too small: {0}")]
    DomainTooSmall(String),

    #[error("geodesic enumeration exceeded the cap of {cap} paths")]
    EnumerationOverflow { cap: usize },

    #[error("parameters outside the proposition range: {0}")]
    OutOfRange(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: expected n={expected}, got n={found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid partial injection: {0}")]
    InvalidPartialInjection(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("point {0} used twice")]
    DuplicatePoint(String),

    #[error("expected {expected} points, found {found}")]
    PointCount { expected: usize, found: usize },

    #[error("n={n} exceeds the configured limit {limit}")]
    LimitExceeded { n: usize, limit: usize },

    #[error("subset is not invariant: {0}")]
    NotInvariant(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("no parameter slot ({i},{j},{l}) for n={n}")]
    MissingSlot { n: usize, i: usize, j: usize, l: usize },

    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    #[error("stratum of corank {corank} is inconsistent: {detail}")]
    StratumMismatch { corank: usize, detail: String },

    #[error("cross-section is not canonical: {0}")]
    NotCanonical(String),

    #[error("element is not a member of the cross-section")]
    NotMember,

    #[error("not a D-cross-section: {0}")]
    NotDCrossSection(String),
}

pub type Result<T> = std::result::Result<T, Error>;

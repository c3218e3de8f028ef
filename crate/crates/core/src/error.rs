use alloc::string::String;

pub type Result<T, E = CoreError> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoreError {
    #[error("empty coefficient list")]
    Empty,

    #[error("entry {index} is not finite or is negative ({value})")]
    InvalidEntry { index: usize, value: f64 },

    #[error("entries are not nonincreasing at index {index}")]
    NotSorted { index: usize },

    #[error("normalization off by {deviation:e}")]
    NotNormalized { deviation: f64 },

    #[error("result would need {requested} entries, cap is {cap}")]
    SizeCap { requested: usize, cap: usize },

    #[error("value {0} outside the domain [0, 1]")]
    Domain(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("site {0} lies outside the matrix window")]
    SupportEscape(String),

    #[error("observable is not valid: {0}")]
    InvalidObservable(String),

    #[error("locality violation: {0}")]
    Locality(String),

    #[error("pairing is not disjoint: {0}")]
    PairingOverlap(String),

    #[error("site index out of machine range: {0}")]
    IndexOverflow(String),

    #[error("permutation is not bijective at {0}")]
    NotBijective(String),

    #[error("cannot parse generator: {0}")]
    Parse(String),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),

    #[error("digit {digit} at position {position} is outside 0..{bound}")]
    InvalidDigit { position: usize, digit: u64, bound: String },

    #[error("gap at position {position} must be a positive integer")]
    NonPositiveGap { position: usize },

    #[error("sequence is only defined up to position {defined}, position {requested} requested")]
    SequenceExhausted { defined: usize, requested: usize },

    #[error("{value} is outside the representable range [{lo}, {hi}]")]
    OutOfRange { value: String, lo: String, hi: String },

    #[error("{0} has no canonical expansion (only an infinite (s-1)-run represents it)")]
    NonCanonical(String),

    #[error("family constraint violated: {0}")]
    FamilyConstraint(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("enumeration of {count} items exceeds the cap of {cap}")]
    Blowup { count: String, cap: u64 },

    #[error("block set is empty")]
    EmptyBlockSet,

    #[error("ratio {0} is not strictly between 0 and 1")]
    RatioOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse family text `{text}`: {reason}")]
    Parse { text: String, reason: String },

    #[error("digit {0} has no admissible sibling to its right")]
    NoSibling(u32),

    #[error("scales are degenerate: {0}")]
    DegenerateScales(String),
}

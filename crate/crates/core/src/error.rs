use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("weight at position {index} is not positive ({value})")]
    NonPositiveWeight { index: usize, value: String },

    #[error("could not parse weight {0:?}")]
    BadWeight(String),

    #[error("literal weight list is empty")]
    EmptyLiteral,

    #[error("literal weight list has {len} entries (limit {limit})")]
    LiteralTooLong { len: usize, limit: usize },

    #[error("window ending at index {needed} exceeds horizon {horizon}")]
    HorizonExceeded { needed: usize, horizon: usize },

    #[error("index arithmetic overflowed while computing {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sequence declared dyadic-exact produced a non-dyadic weight at index {0}")]
    NotDyadic(usize),

    #[error("no admissible pairs: found {found} of {needed} within the scanned range")]
    NoPairsFound { found: usize, needed: usize },

    #[error("precondition unmet: {what} = {value}")]
    PreconditionUnmet { what: &'static str, value: f64 },
}

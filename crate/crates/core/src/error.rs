use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A digit exceeds the alphabet of its position.
    #[error("digit {digit} at position {position} exceeds the maximal digit {max}")]
    Alphabet { position: usize, digit: u32, max: u32 },

    /// An exhaustive enumeration would visit too many tuples.
    #[error("search space of {size} tuples exceeds the limit of {limit}")]
    SearchTooLarge { size: u128, limit: u128 },

    /// `Id - S` is numerically singular in the density construction.
    #[error("singular correction system (reciprocal condition {rcond:e})")]
    SingularSystem { rcond: f64 },

    /// The requested truncation depth leaves a geometric tail above tolerance.
    #[error("truncation depth {depth} leaves a tail of {tail:e}; need at least {required}")]
    TruncationTooShallow { depth: usize, tail: f64, required: usize },

    /// The digit set violates the allowability condition.
    #[error("digit set is not allowable: gap {gap} exceeds {bound}")]
    NotAllowable { gap: f64, bound: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

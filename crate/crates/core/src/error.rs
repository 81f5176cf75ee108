use thiserror::Error;

/// Errors raised by the partition calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("point {point} is outside the declared shape P({upper},{lower})")]
    PointOutOfRange {
        point: String,
        upper: usize,
        lower: usize,
    },

    #[error("point {0} is listed twice")]
    DuplicatePoint(String),

    #[error("point {0} of the declared shape is missing")]
    MissingPoint(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("cannot rotate a leg out of an empty row")]
    EmptyRow,

    #[error("leg bound exceeded: {legs} legs requested, bound is {bound}")]
    BoundExceeded { legs: usize, bound: usize },

    #[error("size budget exceeded: {entries} entries requested, budget is {budget}")]
    BudgetExceeded { entries: u128, budget: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("GramSingular: Gram matrix of size {size} has rank {rank}")]
    GramSingular { size: usize, rank: usize },

    #[error("invalid capping: {0}")]
    InvalidCapping(String),

    #[error("sample {partition} is not in the difference set {set}")]
    NotInDifferenceSet { partition: String, set: String },

    #[error("NoMatch: no noncrossing family matches {0}")]
    NoMatch(String),

    #[error("unknown name: {0}")]
    UnknownName(String),
}

impl Error {
    /// Short machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "Syntax",
            Error::PointOutOfRange { .. } => "PointOutOfRange",
            Error::DuplicatePoint(_) => "DuplicatePoint",
            Error::MissingPoint(_) => "MissingPoint",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::EmptyRow => "EmptyRow",
            Error::BoundExceeded { .. } => "BoundExceeded",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::GramSingular { .. } => "GramSingular",
            Error::InvalidCapping(_) => "InvalidCapping",
            Error::NotInDifferenceSet { .. } => "NotInDifferenceSet",
            Error::NoMatch(_) => "NoMatch",
            Error::UnknownName(_) => "UnknownName",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

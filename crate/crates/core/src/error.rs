use thiserror::Error;

use crate::aci_core::Completion;

pub type Result<T> = std::result::Result<T, Error>;

/// Two completions of the same matrix with different ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct RankWitnessPair {
    pub low: Completion,
    pub low_rank: usize,
    pub high: Completion,
    pub high_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("{0} is not a prime no larger than 65536")]
    NotPrime(u64),
    #[error("element enumeration requires a finite field")]
    InfiniteField,
    #[error("entry {entry} is not affine: {detail}")]
    NonAffine { entry: String, detail: String },
    #[error("indeterminate `{name}` appears in columns {} and {}", first + 1, second + 1)]
    ColumnSharing {
        name: String,
        first: usize,
        second: usize,
    },
    #[error("unknown indeterminate `{0}`")]
    UnknownIndeterminate(String),
    #[error("completion assigns no value to `{0}`")]
    MissingAssignment(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("search needs {needed} completions but the budget allows {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("{n} columns exceed the subset enumeration limit of {limit}")]
    TooManyColumns { n: usize, limit: usize },
    #[error("field of size {size} is smaller than the required {required}")]
    FieldTooSmall { size: u64, required: u64 },
    #[error("matrix is not constantRank")]
    NotConstantRank(Option<Box<RankWitnessPair>>),
    #[error("block reduction failed: {0}")]
    ReductionFailed(String),
    #[error("internal assertion failed: {0}")]
    InternalAssertionFailed(String),
    #[error("syntax error at position {position}: expected {expected}")]
    SyntaxError { position: usize, expected: String },
    #[error("unknown field `{0}` (use gf(p) or rational)")]
    UnknownField(String),
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("wrong number of parts: expected {expected}, found {found}")]
    WrongPartCount { expected: usize, found: usize },

    #[error("slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },

    #[error("composition with the unit 1_0 is not available in nonunital mode")]
    ContractionForbidden,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("polynomial is not multilinear: {0}")]
    NotMultilinear(String),

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("zero generator in generator set")]
    ZeroGenerator,

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("evaluation needs {required} basis tuples, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("missing slice for arity {0}")]
    MissingSlice(usize),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("cache format error: {0}")]
    CacheFormat(String),

    #[error("invalid algebra spec: {0}")]
    Spec(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ArityMismatch { .. } => "arity_mismatch",
            Error::WrongPartCount { .. } => "wrong_part_count",
            Error::SlotOutOfRange { .. } => "slot_out_of_range",
            Error::ContractionForbidden => "contraction_forbidden",
            Error::InvalidPermutation(_) => "invalid_permutation",
            Error::Parse { .. } => "parse",
            Error::NotMultilinear(_) => "not_multilinear",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::ZeroGenerator => "zero_generator",
            Error::InvalidAlgebra(_) => "invalid_algebra",
            Error::AlgebraMismatch => "algebra_mismatch",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::MissingSlice(_) => "missing_slice",
            Error::Inconsistent(_) => "inconsistent",
            Error::CacheFormat(_) => "cache_format",
            Error::Spec(_) => "algebra_spec",
            Error::Io(_) => "io",
        }
    }
}

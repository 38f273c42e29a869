use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group order {} exceeds the configured cap {cap}", order.map_or("overflow".to_string(), |o| o.to_string()))]
    GroupTooLarge { order: Option<u64>, cap: u64 },
    #[error("rank mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("residue {value} out of range for modulus {modulus}")]
    OutOfRange { value: i128, modulus: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("sub-multiset is not contained in the sequence")]
    Containment,
    #[error("not a zero-sum sub-multiset")]
    NotZeroSum,
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A guarantee that should follow from a theorem did not materialise.
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("constant is unbounded: {0}")]
    Unbounded(String),
}

impl Error {
    /// Stable token used in the CLI's `ERROR:<kind>:` prefix.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGroup(_) => "invalid_group",
            Error::GroupTooLarge { .. } => "group_too_large",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::OutOfRange { .. } => "out_of_range",
            Error::Parse(_) => "parse",
            Error::Containment => "containment",
            Error::NotZeroSum => "not_zero_sum",
            Error::Precondition(_) => "precondition",
            Error::InvariantViolated(_) => "invariant_violated",
            Error::BudgetExhausted(_) => "budget_exhausted",
            Error::Unbounded(_) => "unbounded",
        }
    }
}

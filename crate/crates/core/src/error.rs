use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty continued fraction")]
    EmptyWord,

    #[error("continued fraction term at position {position} must be positive")]
    NonPositiveTerm { position: usize },

    #[error("valuation undefined for m = {0}")]
    ValuationUndefined(i64),

    #[error("spec exhausted: needs f({needed}) but table ends at f({max})")]
    SpecExhausted { needed: u32, max: u32 },

    #[error("invalid ruler spec: {0}")]
    InvalidSpec(String),

    #[error("palindrome required")]
    PalindromeRequired,

    #[error("index {got} below minimum {min}")]
    IndexTooSmall { min: u32, got: u32 },

    #[error("divisibility violated: 2*r_n does not divide g_(n+2) at n = {n}")]
    DivisibilityViolated { n: u32 },

    #[error("not a convergent: P/Q for n = {n} missing from the expansion")]
    NotAConvergent { n: u32 },

    #[error("precision budget exceeded (depth {budget})")]
    PrecisionBudgetExceeded { budget: u64 },

    #[error("bracket endpoints must satisfy lo < hi")]
    EmptyBracket,

    #[error("bracket endpoint must be positive")]
    NonPositiveEndpoint,
}

pub type Result<T> = std::result::Result<T, Error>;

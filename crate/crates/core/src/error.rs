use thiserror::Error;

/// Errors raised by the library. Every variant names the offending input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid economy: {0}")]
    InvalidEconomy(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("invalid preference for student {student}: {reason}")]
    InvalidPreference { student: String, reason: String },

    #[error("invalid master list: {0}")]
    InvalidMasterList(String),

    #[error("dimension mismatch: expected {expected_schools}x{expected_types} grid, got {schools}x{types}")]
    DimensionMismatch {
        expected_schools: usize,
        expected_types: usize,
        schools: usize,
        types: usize,
    },

    #[error("invalid goal parameters: {0}")]
    InvalidGoal(String),

    #[error("policy goal is empty")]
    EmptyGoal,

    #[error("invalid objective: {0}")]
    InvalidObjective(String),

    #[error("{what} budget exceeded: {required} > {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        limit: u64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix F is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("non-integer constraint data: {0}")]
    NonInteger(String),

    #[error("row {0} is an inequality; run slack_expand first")]
    InequalityRow(usize),

    #[error("row {row} is infeasible over {{0,1}}^n (M = {slack_bound} < 0)")]
    InfeasibleRow { row: usize, slack_bound: i64 },

    #[error("unsupported instance: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("instance too large for enumeration: n = {n} exceeds {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

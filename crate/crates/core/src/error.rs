use thiserror::Error;

/// Errors surfaced by domain construction and exact-mode operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("word does not belong to the domain: {0}")]
    WordOutsideDomain(String),
    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: String, size: String },
    #[error("operands live on different domains")]
    DomainMismatch,
    #[error("domain too large for exact mode: {size} exceeds cap {cap}")]
    ScaleLimit { size: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("infeasible statistics: {0}")]
    InfeasibleStatistics(String),
    #[error("exact table unavailable: {0}")]
    NoExactTable(String),
    #[error("budget exceeded: needed {needed}, budget {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
}

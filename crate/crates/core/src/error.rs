use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("structural tree: {0}")]
    InvalidTree(String),
    #[error("scaling law: {0}")]
    InvalidLaw(String),
    #[error("no root of the index equation in [{lo}, {hi}]: F(lo) = {f_lo}, F(hi) = {f_hi}")]
    NoRoot { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("root finder did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("node budget exceeded: {needed} nodes requested, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("malformed dump: {0}")]
    Dump(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

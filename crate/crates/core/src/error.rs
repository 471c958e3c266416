use thiserror::Error;

/// Errors produced by the analysis and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("bits per symbol {0} out of range for this constellation family")]
    BitsPerSymbol(u32),
    #[error("invalid signal set: {0}")]
    InvalidSignalSet(String),
    #[error("unknown signal set descriptor `{0}`")]
    UnknownSignalSet(String),
    #[error("unknown design `{0}`")]
    UnknownDesign(String),
    #[error("invalid design: {0}")]
    InvalidDesign(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("enumeration of {needed} cases exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("zero channel vector")]
    ZeroVector,
    #[error("decoder `{decoder}` cannot be used here: {reason}")]
    DecoderIncompatible { decoder: String, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("not enough data: {0}")]
    InsufficientData(String),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

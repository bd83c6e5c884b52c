use thiserror::Error;

/// Errors raised by the arithmetic layer and the identity routes built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division leaves a nonzero remainder")]
    NonExactDivision,
    #[error("cannot evaluate at q = 0")]
    EvalAtZero,
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,
    #[error("constant term of the series is not invertible")]
    NonInvertibleConstantTerm,
    #[error("tableau enumeration of {count} items exceeds the cap of {cap}")]
    EnumerationTooLarge { count: u128, cap: u128 },
    #[error("result is not a Laurent polynomial")]
    InternalNonLaurent,
    #[error("{0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

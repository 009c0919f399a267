use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("unsupported extension: {0}")]
    UnsupportedExtension(String),
    #[error("not p-integral: {0}")]
    NotPIntegral(String),
    #[error("variable tables differ")]
    VarMismatch,
    #[error("base rings differ")]
    BaseMismatch,
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("leading coefficient is not a unit")]
    NonUnitLeadingCoefficient,
    #[error("grading mismatch: {0}")]
    GradingMismatch(String),
    #[error("coefficient not in F_(p^n): {0}")]
    CoefficientNotInFpn(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("formal group law has height below {0}")]
    HeightTooLow(u32),
    #[error("compatibility failure: {0}")]
    CompatibilityFailure(String),
    #[error("relation not preserved: {0}")]
    RelationNotPreserved(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("truncation exceeded: {0}")]
    TruncationExceeded(String),
    #[error("not a constant: {0}")]
    NotConstant(String),
    #[error("undeclared symbol {0}")]
    UndeclaredSymbol(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("degenerate divisor: {0}")]
    DegenerateDivisor(String),
    #[error("degenerate operator: {0}")]
    DegenerateOperator(String),
    #[error("flag function is not in the kernel of the current quotient: {0}")]
    NotAKernelElement(String),
    #[error("Berezinian undefined: {0}")]
    BerUndefined(String),
    #[error("inverse Berezinian undefined: {0}")]
    BerStarUndefined(String),
    #[error("illegal wrongness: {0}")]
    IllegalWrongness(String),
    #[error("cofactor undefined: {0}")]
    CofactorUndefined(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix: {0}")]
    SingularMatrix(String),
    #[error("kernel not in general position: {0}")]
    KernelNotInGeneralPosition(String),
    #[error("infinite-dimensional kernel: {0}")]
    InfiniteDimensionalKernel(String),
    #[error("remainder is not a constant: {0}")]
    RemainderNotConstant(String),
    #[error("flag is not invariant: {0}")]
    NotInvariantFlag(String),
    #[error("flag not in general position: {0}")]
    FlagNotInGeneralPosition(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("parity conflict: {0}")]
    ParityConflict(String),
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::UndeclaredSymbol(_) | Error::ParityConflict(_)
        )
    }

    /// Stable identifier used in structured output and by the C interface.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotInvertible(_) => "NotInvertible",
            Error::TruncationExceeded(_) => "TruncationExceeded",
            Error::NotConstant(_) => "NotConstant",
            Error::UndeclaredSymbol(_) => "UndeclaredSymbol",
            Error::ModelMismatch(_) => "ModelMismatch",
            Error::DegenerateDivisor(_) => "DegenerateDivisor",
            Error::DegenerateOperator(_) => "DegenerateOperator",
            Error::NotAKernelElement(_) => "NotAKernelElement",
            Error::BerUndefined(_) => "BerUndefined",
            Error::BerStarUndefined(_) => "BerStarUndefined",
            Error::IllegalWrongness(_) => "IllegalWrongness",
            Error::CofactorUndefined(_) => "CofactorUndefined",
            Error::ParityMismatch(_) => "ParityMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SingularMatrix(_) => "SingularMatrix",
            Error::KernelNotInGeneralPosition(_) => "KernelNotInGeneralPosition",
            Error::InfiniteDimensionalKernel(_) => "InfiniteDimensionalKernel",
            Error::RemainderNotConstant(_) => "RemainderNotConstant",
            Error::NotInvariantFlag(_) => "NotInvariantFlag",
            Error::FlagNotInGeneralPosition(_) => "FlagNotInGeneralPosition",
            Error::Parse { .. } => "Parse",
            Error::ParityConflict(_) => "ParityConflict",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

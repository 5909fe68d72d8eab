use thiserror::Error;

/// Errors raised by constructions, predictors and verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^31")]
    InvalidModulus(u64),
    #[error("operands belong to different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("field modulus {modulus} exceeds the root-scan bound {bound}")]
    FieldTooLarge { modulus: u64, bound: u64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index range {start}..{end} exceeds the available {len}")]
    IndexOutOfRange {
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has a zero constant term")]
    ZeroConstantTerm,
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("polynomial is not squarefree: {0}")]
    NotSquarefree(String),
    #[error(
        "root set is incomplete: found {found} distinct roots of a degree-{degree} polynomial"
    )]
    IncompleteRoots { found: usize, degree: usize },
    #[error("root set was computed for a different polynomial")]
    RootSetMismatch,
    #[error("{what} has degree {degree}, must be below {bound}")]
    DegreeTooLarge {
        what: &'static str,
        degree: usize,
        bound: usize,
    },
    #[error("operation requires a prime field, got {0}")]
    NotPrimeField(String),
    #[error("column count m must be at least 1")]
    EmptyColumnCount,
    #[error(
        "a window of r = {r} consecutive rows cannot generate a code of dimension {dim} \
         (the block matrix has {rows} rows; {reason})"
    )]
    SpanDeficit {
        r: usize,
        dim: usize,
        rows: usize,
        reason: String,
    },
    #[error("enumeration of {size} elements exceeds the bound {bound}")]
    TooLarge { size: String, bound: u64 },
    #[error("the code is the zero code")]
    ZeroCode,
    #[error("no admissible sample after {0} attempts")]
    ExhaustedRetries(usize),
    #[error("exact division left a nonzero remainder: {0}")]
    InexactDivision(String),
    #[error("predicted identity does not hold: {0}")]
    TheoremViolation(String),
    #[error("invalid campaign configuration: {0}")]
    InvalidCampaign(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

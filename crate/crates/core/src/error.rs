use thiserror::Error;

/// Errors raised anywhere in the workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field GF({p}^{m}) exceeds the supported size of 2^20 elements")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("{l} does not divide the extension degree {m}")]
    NotADivisor { l: u32, m: u32 },
    #[error("element {0} does not lie in the requested subfield")]
    NotInSubfield(u32),
    #[error("zero has no multiplicative character value")]
    ZeroArgument,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("table cache version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u16, expected: u16 },
    #[error("table cache is corrupt: {0}")]
    CorruptTable(String),
    #[error("table cache holds GF({found_p}^{found_m}) but GF({p}^{m}) was requested")]
    FieldMismatch {
        p: u64,
        m: u32,
        found_p: u64,
        found_m: u32,
    },

    #[error("enumeration of {0} codewords exceeds the budget")]
    BudgetExceeded(u128),
    #[error("only minimum distance 3 is supported, got {0}")]
    UnsupportedDistance(u64),
    #[error("weight distribution is inconsistent: {0}")]
    InconsistentDistribution(String),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("requires characteristic 2")]
    OddCharacteristic,
    #[error("requires odd characteristic")]
    EvenCharacteristic,
    #[error("requires odd extension degree m")]
    EvenM,
    #[error("function must vanish at zero")]
    NonzeroAtZero,
    #[error("{family} is not applicable: {reason}")]
    NotApplicable { family: String, reason: String },
    #[error("{0} failed the oval slope test")]
    ValidationFailed(String),
    #[error("cannot parse polynomial spec {0:?}")]
    BadPolySpec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn not_applicable(family: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::NotApplicable {
        family: family.into(),
        reason: reason.into(),
    }
}

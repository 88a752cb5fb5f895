use thiserror::Error;

/// Errors surfaced by graph construction, polynomial algebra, enumeration
/// and the Ising evaluators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("construction table error: {0}")]
    ConstructionTable(String),

    #[error("family mismatch: expected {expected}, got {found}")]
    FamilyMismatch { expected: String, found: String },

    #[error("unsupported level {level}: {reason}")]
    UnsupportedLevel { level: u32, reason: String },

    #[error("{what} budget exceeded: required {required}, budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u64,
        budget: u64,
    },

    #[error("vertex {vertex} has degree {degree}; only degrees 2 and 4 are supported")]
    UnsupportedDegree { vertex: String, degree: usize },

    #[error("no edge pairing available for degree-4 vertex {vertex}")]
    MissingPairing { vertex: String },

    #[error("pole: substituting 0 into variable {var} with negative exponent")]
    Pole { var: String },

    #[error("statistics undefined: polynomial has mixed-sign coefficients")]
    MixedSigns,

    #[error("negative power of a non-monomial is unsupported")]
    NegativePower,

    #[error("incompatible substitution: {0}")]
    Substitution(String),

    #[error("odd exponent of {var} where only even powers are consistent")]
    OddExponent { var: String },

    #[error("zero temperature (z = 1): tail bound degenerates, refusing")]
    ZeroTemperature,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

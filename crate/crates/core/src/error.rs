use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Budget errors are recoverable: the analyzer turns them into an
/// `Inconclusive` verdict or skips to the next route instead of aborting.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("malformed input at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("exponent must be a non-negative integer, found `{0}`")]
    NonIntegerExponent(String),

    #[error("exponent {exponent} exceeds the ring's cap of {cap}")]
    ExponentCap { exponent: u64, cap: u32 },

    #[error("duplicate variable `{0}` in ring")]
    DuplicateVariable(String),

    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("no image given for variable `{0}`")]
    MissingImage(String),

    #[error("ring `{0}` is not a doubled ring")]
    NotDoubled(String),

    #[error("no doubled extension matches ring `{0}`")]
    NoDoubledExtension(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("symbol `{0}` already names a ring variable")]
    SymbolCollision(String),

    #[error("empty component list")]
    EmptyComponents,

    #[error("matrix germ is not symmetric: {0}")]
    SymmetryMismatch(String),

    #[error("unknown coefficient `{name}` for normal form {form}")]
    UnknownCoefficient { name: String, form: u8 },

    #[error("invalid catalog entry: {0}")]
    Catalog(String),

    #[error("invalid test curve: {0}")]
    InvalidCurve(String),

    #[error("curve enumeration needs a non-empty set of nonzero coefficients")]
    EmptyCoefficientSet,

    #[error("resource budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("unknown {kind} `{name}`")]
    UnknownStrategy { kind: &'static str, name: String },

    #[error("audit contradiction: {0}")]
    AuditContradiction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_))
    }

    pub(crate) fn syntax(position: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            position,
            message: message.into(),
        }
    }
}

use thiserror::Error;

/// Errors raised by the library.
///
/// Everything except [`Error::Internal`] describes bad input; the CLI maps
/// the former to exit code 1 and the latter to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("context mismatch: {0}")]
    Context(String),
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid field parameter: {0}")]
    InvalidField(String),
    #[error("enumeration cap exceeded: {needed} candidates, cap is {cap}")]
    EnumerationCap { needed: u128, cap: u128 },
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("invalid curve model: {0}")]
    InvalidModel(String),
    #[error("inconsistent point counts: {0}")]
    InconsistentCounts(String),
    #[error("zeta function has a pole at s = {0}")]
    Pole(i64),
    #[error("not a Weil polynomial: {0}")]
    NotWeil(String),
    #[error("degenerate generator: {0}")]
    Degenerate(String),
    #[error("symbolic residue: {0}")]
    SymbolicResidue(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

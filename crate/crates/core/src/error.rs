use thiserror::Error;

use crate::syntax::FragmentLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("invalid model: {}", .0.join("; "))]
    InvalidModel(Vec<String>),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown value `{value}` for variable `{var}`")]
    UnknownValue { var: String, value: String },
    #[error("variable `{0}` is not endogenous")]
    NotEndogenous(String),
    #[error("inconsistent intervention")]
    InconsistentIntervention,
    #[error("probability of an empty multiteam is undefined")]
    EmptyMultiteam,
    #[error("signature mismatch")]
    SignatureMismatch,
    #[error("formula is in fragment {found}, expected at most {expected}")]
    WrongFragment { expected: String, found: FragmentLabel },
    #[error("counterfactuals require a law system; none was supplied")]
    LawsRequired,
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("coefficient at index {0} is zero")]
    ZeroCoefficient(usize),
    #[error("inequality class {found} exceeds target {target}")]
    ClassExceedsTarget { found: String, target: String },
    #[error("not definable in the target fragment: {0}")]
    NotDefinable(String),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard(_))
    }
}

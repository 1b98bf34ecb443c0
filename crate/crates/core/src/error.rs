use thiserror::Error;

/// Errors raised by every module of the crate.
///
/// Each variant has a stable machine-readable [`code`](Error::code) so that
/// front ends can report failures without matching on display strings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("covering pairs close to a cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("`{0}` is not below `{1}`")]
    NotComparable(String, String),
    #[error("{what} exceeds the size limit of {limit}")]
    SizeLimitExceeded { what: &'static str, limit: usize },
    #[error("map is not order preserving: {0}")]
    NotMonotone(String),
    #[error("`{0}` is not a complete lattice")]
    NotCompleteLattice(&'static str),
    #[error("partial map has no extension")]
    NoExtension,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("maps do not form a group: {0}")]
    NotAGroup(String),
    #[error("posets do not match: {0}")]
    Mismatch(String),
    #[error("value is not positive")]
    NonPositive,
    #[error("sign could not be determined within {0} refinement steps")]
    SignUndetermined(u32),
    #[error("locate oracle is inconsistent at {0}")]
    OracleInconsistent(String),
    #[error("refinement budget of {0} steps exhausted")]
    BudgetExceeded(u32),
    #[error("infinite value cannot be refined")]
    NonFinite,
    #[error("undefined operation: {0}")]
    Undefined(String),
    #[error("stage {0} is unavailable")]
    StageUnavailable(usize),
    #[error("{0} lies outside the domain")]
    OutsideDomain(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Cycle(..) => "CycleError",
            Error::UnknownElement(_) => "UnknownElement",
            Error::DuplicateElement(_) => "DuplicateElement",
            Error::NotComparable(..) => "NotComparable",
            Error::SizeLimitExceeded { .. } => "SizeLimitExceeded",
            Error::NotMonotone(_) => "NotMonotone",
            Error::NotCompleteLattice(_) => "NotCompleteLattice",
            Error::NoExtension => "NoExtension",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::NotAutomorphism(_) => "NotAutomorphism",
            Error::NotAGroup(_) => "NotAGroup",
            Error::Mismatch(_) => "Mismatch",
            Error::NonPositive => "NonPositive",
            Error::SignUndetermined(_) => "SignUndetermined",
            Error::OracleInconsistent(_) => "OracleInconsistent",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::NonFinite => "NonFinite",
            Error::Undefined(_) => "Undefined",
            Error::StageUnavailable(_) => "StageUnavailable",
            Error::OutsideDomain(_) => "OutsideDomain",
            Error::Invalid(_) => "Invalid",
            Error::Parse(_) => "ParseError",
        }
    }

    /// True for errors caused by an exhausted size or refinement budget.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::SizeLimitExceeded { .. } | Error::BudgetExceeded(_) | Error::SignUndetermined(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

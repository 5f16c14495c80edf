use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2 and at most 2^32, got {0}")]
    InvalidModulus(u64),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("cardinality does not fit in 128 bits")]
    Overflow,
    #[error("generators {0} and {1} have nonzero symplectic form")]
    NotIsotropic(usize, usize),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("outcome has probability zero for this state")]
    IncompatibleOutcome,
    #[error("cells do not partition the ontic space: {0}")]
    NotAPartition(String),
    #[error("observable does not lie in the state's known space")]
    NotInV,
    #[error("observables {witness:?} are partially known across the family")]
    PartiallyKnownObservable { witness: Vec<Vec<u64>> },
    #[error("chosen observable does not commute with the constant part of the family")]
    NotIsotropicChoice,
    #[error("chosen observable already lies in the family's known space")]
    DegenerateChoice,
    #[error("invalid family: {0}")]
    BadFamilyShape(String),
    #[error("operation needs a prime modulus, got {0}")]
    NotSupportedModulus(u64),
    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),
    #[error("injections overlap or are not injective on system {0}")]
    BadInjection(usize),
    #[error("matrix is not symplectic")]
    InvalidMap,
    #[error("index {index} out of range for {n} systems")]
    IndexError { index: usize, n: usize },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("operation needs d = 2, got {0}")]
    NotD2(u64),
    #[error("groups are not rephasings of each other")]
    NotRephasing,
    #[error("group does not describe a pure state")]
    NotPure,
    #[error("states are identical")]
    IdenticalStates,
    #[error("generators {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("generators produce minus the identity")]
    ContainsMinusIdentity,
    #[error("outcome contradicts a known value")]
    InconsistentOutcome,
    #[error("expected {expected} questions, got {found}")]
    WrongQuestionCount { expected: usize, found: usize },
    #[error("invalid epistemic state: {0}")]
    InvalidState(String),
    #[error("ontic state is not in the support of the state")]
    OnticOutsideSupport,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Condition name used in structured error output.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ModulusMismatch(..) => "ModulusMismatch",
            Error::Overflow => "Overflow",
            Error::NotIsotropic(..) => "NotIsotropic",
            Error::UnsupportedShape(_) => "UnsupportedShape",
            Error::IncompatibleOutcome => "IncompatibleOutcome",
            Error::NotAPartition(_) => "NotAPartition",
            Error::NotInV => "NotInV",
            Error::PartiallyKnownObservable { .. } => "PartiallyKnownObservable",
            Error::NotIsotropicChoice => "NotIsotropicChoice",
            Error::DegenerateChoice => "DegenerateChoice",
            Error::BadFamilyShape(_) => "BadFamilyShape",
            Error::NotSupportedModulus(_) => "NotSupportedModulus",
            Error::SearchSpaceTooLarge(_) => "SearchSpaceTooLarge",
            Error::BadInjection(_) => "BadInjection",
            Error::InvalidMap => "InvalidMap",
            Error::IndexError { .. } => "IndexError",
            Error::TooLarge(_) => "TooLarge",
            Error::NotD2(_) => "NotD2",
            Error::NotRephasing => "NotRephasing",
            Error::NotPure => "NotPure",
            Error::IdenticalStates => "IdenticalStates",
            Error::NotCommuting(..) => "NotCommuting",
            Error::ContainsMinusIdentity => "ContainsMinusIdentity",
            Error::InconsistentOutcome => "InconsistentOutcome",
            Error::WrongQuestionCount { .. } => "WrongQuestionCount",
            Error::InvalidState(_) => "InvalidState",
            Error::OnticOutsideSupport => "OnticOutsideSupport",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

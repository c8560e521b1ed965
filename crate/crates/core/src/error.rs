use alloc::string::String;
use core::fmt;

/// Everything that can go wrong while building or checking a certificate.
///
/// Every variant has a stable machine-readable name (see [`Error::name`]) that
/// the command-line front end prints verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Error {
    /// The transition data does not describe an essential, nonempty SFT.
    InvalidSubshift(String),
    /// An enumeration or selector bound was hit.
    CapExceeded {
        what: &'static str,
        limit: usize,
        requested: usize,
    },
    /// A point generator was asked for a symbol past its declared horizon.
    HorizonExceeded { needed: usize, available: usize },
    /// A cylinder union contains no allowed word.
    EmptyOpenSet,
    /// Nothing certifying was found up to the horizon. This is not a disproof.
    NoWitnessInHorizon { horizon: usize },
    InvalidTolerance,
    /// An operation was called outside its documented domain.
    Precondition(String),
    InvalidSplit(String),
    /// The system has zero topological entropy.
    EntropyZero,
    BudgetExceeded { budget: usize, needed: usize },
    /// A replayed certificate or tree failed one of its invariants.
    InvariantViolated {
        invariant: &'static str,
        detail: String,
    },
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidSubshift(_) => "InvalidSubshift",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::HorizonExceeded { .. } => "HorizonExceeded",
            Error::EmptyOpenSet => "EmptyOpenSet",
            Error::NoWitnessInHorizon { .. } => "NoWitnessInHorizon",
            Error::InvalidTolerance => "InvalidTolerance",
            Error::Precondition(_) => "PreconditionViolated",
            Error::InvalidSplit(_) => "InvalidSplit",
            Error::EntropyZero => "EntropyZero",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::InvariantViolated { .. } => "InvariantViolated",
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn violated(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::InvariantViolated {
            invariant,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSubshift(msg) => write!(f, "invalid subshift: {msg}"),
            Error::CapExceeded {
                what,
                limit,
                requested,
            } => write!(f, "{what} cap exceeded: {requested} > {limit}"),
            Error::HorizonExceeded { needed, available } => {
                write!(f, "horizon exceeded: need index {needed}, have {available}")
            }
            Error::EmptyOpenSet => f.write_str("cylinder union contains no allowed word"),
            Error::NoWitnessInHorizon { horizon } => {
                write!(f, "no witness found up to horizon {horizon}")
            }
            Error::InvalidTolerance => f.write_str("tolerance must be positive"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::InvalidSplit(msg) => write!(f, "invalid split: {msg}"),
            Error::EntropyZero => f.write_str("topological entropy is zero"),
            Error::BudgetExceeded { budget, needed } => {
                write!(f, "budget exceeded: need {needed} symbols, budget {budget}")
            }
            Error::InvariantViolated { invariant, detail } => {
                write!(f, "invariant `{invariant}` violated: {detail}")
            }
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl core::error::Error for Error {}

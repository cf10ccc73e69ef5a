use thiserror::Error;

/// Errors shared by all modules. Capped operations refuse inputs over their
/// cap instead of approximating.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity {arity} exceeds maximum arity {max}")]
    ArityTooLarge { arity: u32, max: u32 },

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: u32, right: u32 },

    #[error("{op}: arity {arity} exceeds cap {cap}")]
    CapExceeded {
        op: &'static str,
        arity: u32,
        cap: u32,
    },

    #[error("input word {word:#x} out of range for arity {arity}")]
    WordOutOfRange { word: u64, arity: u32 },

    #[error("constant function has no monomials to restrict to")]
    ConstantFunction,

    #[error("arity {arity} is not a power of two")]
    NotPowerOfTwo { arity: u32 },

    #[error("variable index {var} out of range for arity {arity}")]
    VariableOutOfRange { var: u32, arity: u32 },

    #[error("decision tree repeats variable {var} on a root-to-leaf path")]
    RepeatedVariable { var: u32 },

    #[error("tree distribution is invalid: {0}")]
    InvalidDistribution(String),

    #[error("acceptance profile entry at {index} is outside [0, 1]")]
    ProfileEntryOutOfRange { index: u64 },

    #[error("epsilon {eps} outside the valid range [{lo}, {hi}]")]
    EpsOutOfRange { eps: String, lo: String, hi: String },

    #[error("repetition count {0} must be odd")]
    EvenRepetition(u64),

    #[error("vertex set is empty")]
    EmptySet,

    #[error("vertex set of size {size} is exactly half the cube; the check requires an unbalanced set")]
    BalancedSet { size: u64 },

    #[error("oracle indices must differ (both {0})")]
    SameIndex(u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

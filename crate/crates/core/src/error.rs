use thiserror::Error;

/// Errors raised by lamination operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LamError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("degree must be at least 2, got {0}")]
    InvalidDegree(u32),
    #[error("fraction {0} is not in lowest terms")]
    Unreduced(String),
    #[error("angle {0} is outside [0, 1)")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("digit {digit} is not valid in base {base}")]
    InvalidDigit { digit: u32, base: u32 },
    #[error("repeated points: {0}")]
    RepeatedPoints(String),
    #[error("leaves {0} and {1} cross")]
    Crossing(String, String),
    #[error("leaves {0} and {1} are not disjoint")]
    NotDisjoint(String, String),
    #[error("vertices collide under iteration at step {step}")]
    CriticalCollapse { step: usize },
    #[error("no return within {0} iterations")]
    NotPeriodic(usize),
    #[error("orbit is not a valid forward invariant set: {0}")]
    InvalidForwardSet(String),
    #[error("invalid critical portrait: {0}")]
    InvalidPortrait(String),
    #[error("critical portrait is incompatible with {0}")]
    Incompatible(String),
    #[error("{0} is not a MAC leaf")]
    NotMac(String),
    #[error("polygon is not SCM: {0}")]
    NotScm(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("co-root search failed: {0}")]
    CoRoot(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = LamError> = std::result::Result<T, E>;

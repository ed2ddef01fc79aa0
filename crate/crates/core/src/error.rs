use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity {n} exceeds the configured cap of {cap}")]
    ArityOverCap { n: usize, cap: usize },

    #[error("arity {n} is below the minimum of {min}")]
    ArityTooSmall { n: usize, min: usize },

    #[error("arity cap {0} is outside 1..={max}", max = crate::table::HARD_MAX_ARITY)]
    InvalidCap(usize),

    #[error("variable index {index} is out of range for arity {n}")]
    VarOutOfRange { index: u32, n: usize },

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("invalid assignment {0:?}: expected a non-empty string over T/F")]
    InvalidAssignment(String),

    #[error("staircase block size {k} is out of range 0..={n}")]
    StaircaseOutOfRange { n: usize, k: usize },

    #[error("invalid truth table encoding: {0}")]
    InvalidTable(String),

    #[error("invalid normal form: {0}")]
    InvalidDnf(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("xor cannot be negated without expansion")]
    XorUnsupported,

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(String),

    #[error("sample count must be at least 1")]
    ZeroSamples,
}

impl Error {
    /// True for errors caused by the exhaustive-representation size limit.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ArityOverCap { .. })
    }
}

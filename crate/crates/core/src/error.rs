use thiserror::Error;

/// Errors raised by field construction, code building and the census layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{d} does not divide the extension degree {m}")]
    NotADivisor { d: u32, m: u32 },

    #[error("instance too large: {what} = {value} exceeds the limit {limit}")]
    ScaleGuard {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("element encoding {0} is out of range for this field")]
    ElementOutOfRange(u64),

    #[error("operation undefined for the zero element")]
    ZeroElement,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operands live in different fields")]
    TowerMismatch,

    #[error("alpha entries are linearly dependent over F_q (rank {rank} < {n})")]
    DependentAlpha { rank: usize, n: usize },

    #[error("generator matrix has rank {rank}, expected {k}")]
    RankDefect { rank: usize, k: usize },

    #[error("matrix entries must lie in the base field F_q")]
    NotOverBaseField,

    #[error("matrix is singular")]
    Singular,

    #[error("codes have incompatible contexts: {0}")]
    ContextMismatch(String),

    #[error("sequence too short to certify stabilization")]
    SequenceTooShort,

    #[error("no irreducible polynomial found for degree {0}")]
    NoIrreducible(u32),

    #[error("spec error: {0}")]
    Spec(String),
}

impl Error {
    /// True for rejections caused by instance size rather than malformed input.
    pub fn is_scale_guard(&self) -> bool {
        matches!(self, Error::ScaleGuard { .. })
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

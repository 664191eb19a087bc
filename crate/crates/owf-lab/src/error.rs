use thiserror::Error;

/// Coarse classification used by callers (the CLI in particular) to pick an
/// exit code without matching every variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed textual input.
    Parse,
    /// A value outside an operation's domain or a violated precondition.
    Domain,
    /// Work refused because it would exceed a configured budget.
    Budget,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty digit string")]
    EmptyDigits,

    #[error("invalid digit {digit:?} at position {position} for base {base}")]
    InvalidDigit {
        digit: char,
        position: usize,
        base: u32,
    },

    #[error("the iteration is defined for x >= 1; got 0")]
    ZeroIterate,

    #[error("iteration count must be at least 1")]
    ZeroIterations,

    #[error("iteration count {rounds} exceeds the enumerable maximum {max}")]
    IterationOverflow { rounds: u32, max: u32 },

    #[error("parameters require n >= 1 and r >= 1; got n={n}, r={r}")]
    InvalidParams { n: u32, r: u32 },

    #[error("input of {bit_length} bits lies outside the domain [1, 2^{n})")]
    InputOutOfDomain { bit_length: u64, n: u32 },

    #[error("input has {bit_length} significant bits but strict width demands exactly {n}")]
    StrictWidth { bit_length: u64, n: u32 },

    #[error("digest width {actual} does not match the expected width {expected}")]
    WidthMismatch { expected: u32, actual: u32 },

    #[error("range [{lo}, {hi}] is empty or inverted")]
    EmptyRange { lo: String, hi: String },

    #[error("range bound {bound} lies outside the domain [1, 2^{n})")]
    RangeOutOfDomain { bound: String, n: u32 },

    #[error("sample count must be at least 1")]
    ZeroSamples,

    #[error("bit-flip sampling needs an input domain of at least 2 bits to keep flipped inputs positive")]
    AvalancheDomain,

    #[error("scan of {required} evaluations exceeds the budget of {budget}; raise the budget to at least {required} to proceed")]
    BudgetExceeded { required: u64, budget: u64 },

    #[error("full enumeration at r={rounds} means 2^{rounds} compositions, past the oracle bound r <= {max}")]
    OracleBound { rounds: u32, max: u32 },

    #[error(
        "cost profiling at r={rounds} would run an exponential search past the bound r <= {max}"
    )]
    ProfileBound { rounds: u32, max: u32 },

    #[error("digest {digest} does not fit in {r} bits")]
    DigestTooWide { digest: String, r: u32 },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EmptyDigits | Error::InvalidDigit { .. } => ErrorKind::Parse,
            Error::BudgetExceeded { .. }
            | Error::OracleBound { .. }
            | Error::ProfileBound { .. } => ErrorKind::Budget,
            _ => ErrorKind::Domain,
        }
    }
}

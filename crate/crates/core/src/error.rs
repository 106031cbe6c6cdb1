use thiserror::Error;

/// Errors raised by the invariant computations.
///
/// Each variant maps to a stable [`Error::code`] so that callers (and the
/// command-line frontend) can tell input problems apart from broken
/// internal invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("discriminant {0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("discriminant {0} is neither a prime congruent to 1 mod 4 nor 8")]
    UnsupportedDiscriminant(i64),
    #[error("narrow class number of Q(sqrt {disc}) is {class_number}, expected 1")]
    NarrowClassNumber { disc: i64, class_number: u64 },
    #[error("{0} is not a rational prime")]
    NotPrime(u64),
    #[error("no totally positive generator found for the prime above {p} within the unit window")]
    NoTotallyPositiveGenerator { p: u64 },
    #[error("-{0} is not a discriminant (must be 0 or 3 mod 4)")]
    InvalidDiscriminant(i64),
    #[error("local Chern divisor sum for D = {0} is not an integer")]
    NonIntegralChernSum(i64),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("element is not elliptic: {0}")]
    NotElliptic(String),
    #[error("rotation is not a root of unity of an allowed order")]
    RotationNotRootOfUnity,
    #[error("completeness certificate failed at height bound {height}: {detail}")]
    Certificate { height: u32, detail: String },
    #[error("inconsistent elliptic counts: {0}")]
    InconsistentCounts(String),
    #[error("mixed computation modes: {0}")]
    MixedModes(String),
    #[error("integrality constraint has {0} solutions, expected exactly one")]
    Integrality(usize),
    #[error("empty vertex set")]
    EmptySet,
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

impl Error {
    /// Stable numeric code, grouped by module (1xx field, 2xx forms,
    /// 3xx cusps, 4xx elliptic, 5xx classifier, 6xx trees, 9xx plumbing).
    pub fn code(&self) -> u16 {
        match self {
            Error::NotFundamental(_) => 101,
            Error::UnsupportedDiscriminant(_) => 102,
            Error::NarrowClassNumber { .. } => 103,
            Error::NotPrime(_) => 104,
            Error::NoTotallyPositiveGenerator { .. } => 105,
            Error::InvalidDiscriminant(_) => 201,
            Error::NonIntegralChernSum(_) => 301,
            Error::Hypothesis(_) => 401,
            Error::NotElliptic(_) => 402,
            Error::RotationNotRootOfUnity => 403,
            Error::Certificate { .. } => 404,
            Error::InconsistentCounts(_) => 405,
            Error::MixedModes(_) => 501,
            Error::Integrality(_) => 502,
            Error::EmptySet => 601,
            Error::InvalidTree(_) => 602,
            Error::InvalidAction(_) => 603,
            Error::Parse(_) => 901,
            Error::Io(_) => 902,
            Error::Internal(_) => 999,
        }
    }

    /// True when the error is caused by the caller's input rather than a
    /// broken internal invariant.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::NonIntegralChernSum(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

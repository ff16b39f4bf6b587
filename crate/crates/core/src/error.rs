use thiserror::Error;

/// Errors raised by the library.
///
/// The variants fall into three groups that the CLI maps onto distinct exit
/// codes: invalid input, exhausted budgets or precision, and internal
/// consistency failures (a computed quantity that should be integral or
/// stable was not).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("gcd({p}, {m}) = {gcd} is not 1")]
    NotCoprime { p: u64, m: u64, gcd: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what}: {needed} exceeds the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },
    #[error("zero has no discrete logarithm")]
    ZeroLog,
    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(i64, u32),
    #[error("singular curve y^2 = x^3 + {a}x + {b} over F_{p}")]
    SingularCurve { p: u64, a: u64, b: u64 },
    #[error("lattice is not of full rank")]
    RankDeficient,
    #[error("p-adic precision exhausted at k = {0}")]
    PrecisionExhausted(u32),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by the caller's parameters.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::NotCoprime { .. }
                | Error::InvalidParameter(_)
                | Error::ConductorMismatch { .. }
                | Error::ZeroLog
                | Error::NotAUnit(..)
                | Error::SingularCurve { .. }
                | Error::RankDeficient
        )
    }

    /// True for errors caused by a resource budget or precision cap.
    pub fn is_exhaustion(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::PrecisionExhausted(_)
        )
    }
}

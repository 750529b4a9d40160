//! Sparse ("fewnomial") univariate real-root engine.
//!
//! Counts the real roots of trinomials over arbitrary intervals in
//! O(log^2 D) field operations via compressed Sturm chains, and
//! eps-approximates all roots of m-nomials on [0, R] by convexity
//! partitioning plus a certified bisection/Newton hybrid. A dense
//! brute-force oracle and operation-count instrumentation back every
//! algorithm with independent checks.

pub mod hybrid;
pub mod ops;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod solver;
pub mod sturm;

pub use ops::OpCounter;
pub use poly::{SignSeq, SparsePoly};
pub use scalar::{Backend, Rational, Sign};
pub use solver::{Provenance, RootReport, SolveRequest};
pub use sturm::{CountQuery, SturmChain};

/// Engine errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The zero polynomial was given where a nonzero one is required.
    ZeroPolynomial,
    /// A trinomial-only operation received the wrong number of terms.
    WrongArity { expected: usize, got: usize },
    /// The minimal exponent must be divided out (apply `op_s`) first.
    NeedsSFirst,
    /// Trinomial exponents share a common factor; substitute x -> x^(1/g)
    /// by dividing the exponents before asking for the discriminant.
    NotPrimitive,
    /// Newton/gamma queried at a point where the derivative vanishes.
    SingularPoint,
    /// No verified alpha bound is known for this (D, m) in strict mode.
    AlphaUnknown,
    /// The float backend hit its precision cap without certifying a sign.
    PrecisionExhausted,
    /// Dense-oracle degree limit exceeded.
    DegreeTooLarge { degree: u64, max: u64 },
    /// A polynomial in the S/L family failed the dampened-ness check.
    NotDampened,
    /// Malformed request (bad interval, eps, or polynomial text).
    InvalidRequest(String),
    /// Internal invariant violation.
    Internal(String),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            Error::WrongArity { expected, got } => {
                write!(f, "expected a {expected}-term polynomial, got {got} terms")
            }
            Error::NeedsSFirst => write!(f, "polynomial has a nonzero minimal exponent; apply S first"),
            Error::NotPrimitive => write!(f, "trinomial exponents are not coprime"),
            Error::SingularPoint => write!(f, "derivative vanishes at the queried point"),
            Error::AlphaUnknown => write!(f, "no verified alpha bound for m >= 4; supply an override"),
            Error::PrecisionExhausted => {
                write!(f, "adaptive float precision cap reached without certifying a sign")
            }
            Error::DegreeTooLarge { degree, max } => {
                write!(f, "degree {degree} exceeds the dense-oracle limit {max}")
            }
            Error::NotDampened => write!(f, "polynomial family is not dampened"),
            Error::InvalidRequest(msg) => write!(f, "invalid request: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant violation: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Polynomial input that is not monic of degree at least one.
    InvalidPolynomial(&'static str),
    NotTotallyReal,
    ReduciblePolynomial,
    /// The supplied basis does not span a ring containing 1.
    BasisNotUnimodular(String),
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    ZeroElement,
    NotTotallyPositive,
    PrecisionExhausted {
        bits: u32,
    },
    DependentUnits,
    NotAUnit {
        index: usize,
    },
    WrongCount {
        expected: usize,
        found: usize,
    },
    NotQuadratic,
    NotFullDimensional,
    UnboundedDirection,
    DegenerateDirection,
    DomainTooSmall {
        what: &'static str,
        n: usize,
    },
    InvalidArgument(&'static str),
    InvariantViolation(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPolynomial(why) => write!(f, "invalid minimal polynomial: {why}"),
            Error::NotTotallyReal => f.write_str("polynomial has non-real roots"),
            Error::ReduciblePolynomial => f.write_str("polynomial is reducible over the rationals"),
            Error::BasisNotUnimodular(why) => write!(f, "integral basis rejected: {why}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::ZeroElement => f.write_str("element is zero"),
            Error::NotTotallyPositive => f.write_str("element is not totally positive"),
            Error::PrecisionExhausted { bits } => {
                write!(f, "could not certify a sign or value below {bits} bits of precision")
            }
            Error::DependentUnits => f.write_str("units are multiplicatively dependent"),
            Error::NotAUnit { index } => write!(f, "unit #{index} is not an integral element of norm ±1"),
            Error::WrongCount { expected, found } => {
                write!(f, "expected {expected} fundamental units, got {found}")
            }
            Error::NotQuadratic => f.write_str("operation requires a quadratic field"),
            Error::NotFullDimensional => f.write_str("cone is not full dimensional"),
            Error::UnboundedDirection => {
                f.write_str("walk left the totally positive cone without meeting a new minimal vector")
            }
            Error::DegenerateDirection => f.write_str("no admissible walking direction"),
            Error::DomainTooSmall { what, n } => write!(f, "{what} is undefined for n = {n}"),
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::InvariantViolation(what) => write!(f, "invariant violated: {what}"),
        }
    }
}

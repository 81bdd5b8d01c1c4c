use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A point lies outside the region where a weight is defined.
    OutOfRange {
        axis: usize,
        value: f64,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    InvalidDomain(&'static str),
    InvalidGrid(&'static str),
    UnsupportedDomain(&'static str),
    MissingData(&'static str),
    /// Too few inputs for an operation that needs several (e.g. refinements).
    Arity {
        needed: usize,
        found: usize,
    },
    /// An eigenvalue index beyond the available list.
    Index {
        index: usize,
        available: usize,
    },
    /// The iterative solver stopped before every wanted pair met the tolerance.
    Convergence {
        iterations: usize,
        residuals: Vec<f64>,
    },
    /// A product spectrum cannot be certified from the given prefixes.
    UnderResolved {
        needed_first: usize,
        needed_second: usize,
    },
    DegenerateBundle,
    Unsupported(&'static str),
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange { axis, value } => {
                write!(f, "coordinate {value} on axis {axis} is outside the tabulated range")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidDomain(msg) => write!(f, "invalid domain: {msg}"),
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::UnsupportedDomain(msg) => write!(f, "unsupported domain: {msg}"),
            Error::MissingData(msg) => write!(f, "missing data: {msg}"),
            Error::Arity { needed, found } => {
                write!(f, "needs at least {needed} inputs, got {found}")
            }
            Error::Index { index, available } => {
                write!(f, "eigenvalue index {index} not available ({available} entries)")
            }
            Error::Convergence { iterations, residuals } => {
                let worst = residuals.iter().cloned().fold(0.0_f64, f64::max);
                write!(
                    f,
                    "eigensolver did not converge after {iterations} iterations (worst residual {worst:e})"
                )
            }
            Error::UnderResolved { needed_first, needed_second } => write!(
                f,
                "product spectrum under-resolved: need at least {needed_first} entries of the first factor and {needed_second} of the second"
            ),
            Error::DegenerateBundle => write!(f, "degenerate constants bundle: zero denominator"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

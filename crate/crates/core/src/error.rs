use alloc::string::String;
use core::fmt;

/// Errors raised by the engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A pivot or leading term fell at or beyond the truncation bound.
    Precision { context: String, suggested_truncation: String },
    DivisionByZero,
    /// Inverse would need exponents outside the representable window.
    OutOfWindow,
    /// A Tate coefficient that should be integral was not.
    NonIntegral { series: String, power: u32 },
    /// Spaces or object chains do not line up.
    Mismatch(String),
    /// An operation of this arity was needed but not available.
    MissingArity(usize),
    /// Two lines are parallel but distinct.
    ParallelLines,
    /// Polygon enumeration hit a configuration it cannot resolve.
    Degenerate(String),
    /// Input failed validation.
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Precision { context, suggested_truncation } => write!(
                f,
                "precision exhausted in {context}; rerun with truncation at least {suggested_truncation}"
            ),
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::OutOfWindow => f.write_str("result needs exponents outside the representable window"),
            Error::NonIntegral { series, power } => {
                write!(f, "coefficient of q^{power} in {series} is not an integer")
            }
            Error::Mismatch(s) => write!(f, "mismatch: {s}"),
            Error::MissingArity(d) => write!(f, "operation of arity {d} is not available"),
            Error::ParallelLines => f.write_str("distinct parallel lines are not supported"),
            Error::Degenerate(s) => write!(f, "degenerate configuration: {s}"),
            Error::Invalid(s) => write!(f, "invalid input: {s}"),
        }
    }
}

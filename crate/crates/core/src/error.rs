use alloc::string::String;
use core::fmt;

/// Error type shared by the whole crate.
///
/// Everything here is an *input* problem: malformed shapes, data that fails
/// a structural check (group relations, equivariance, algebra relations,
/// cocycle conditions), or a request the truncated model cannot represent.
/// Internal invariant violations panic instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Matrix/vector dimensions do not match the operation.
    Shape(String),
    /// Permutations or modules of different arity were combined.
    ArityMismatch { expected: usize, got: usize },
    /// A structural validation failed (group relations, equivariance,
    /// stability, commutativity, cocycle condition, ...).
    Invalid(String),
    /// An unknown preset or label was requested.
    Unknown(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::ArityMismatch { expected, got } => {
                write!(f, "arity mismatch: expected {expected}, got {got}")
            }
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::Unknown(name) => write!(f, "unknown name: {name}"),
        }
    }
}

#[macro_export]
macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::Error::Invalid(alloc::format!($($arg)*))
    };
}

#[macro_export]
macro_rules! shape_err {
    ($($arg:tt)*) => {
        $crate::Error::Shape(alloc::format!($($arg)*))
    };
}

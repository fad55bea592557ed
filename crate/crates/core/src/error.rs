use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported key size: {0} bytes (expected 16 or 32)")]
    UnsupportedKeySize(usize),

    #[error("invalid IV length: {0} bytes (expected 32)")]
    InvalidIvLength(usize),

    #[error("element encoding is {got} bytes, field of degree {degree} needs {expected}")]
    ElementLength {
        degree: u32,
        expected: usize,
        got: usize,
    },

    #[error("element has coefficients at or above degree {degree}")]
    BitsAboveDegree { degree: u32 },

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("bad factorization: {0}")]
    BadFactorization(String),

    #[error("field degree {0} is too large for an exhaustive search")]
    DegreeTooLarge(u32),

    #[error("invalid mini parameters: {0}")]
    MiniParams(String),

    #[error("stream of {got} bytes is too short, at least {need} bytes are required")]
    StreamTooShort { got: usize, need: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

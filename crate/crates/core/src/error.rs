use thiserror::Error;

/// Errors raised by the lattice, decoder and code routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{0} is not divisible by phi = 1+i in the Gaussian integers")]
    NotDivisible(String),

    #[error("operation needs a vector of level at least 1")]
    LevelZero,

    #[error("vector is not a point of BW_{0}")]
    NotAMember(u32),

    #[error("level {n} is above the enumeration cap {cap}")]
    AboveCap { n: u32, cap: u32 },

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("basis vectors are linearly dependent")]
    DependentBasis,

    #[error("layer {layer} is not a codeword of RM({layer}, {n})")]
    NotACodeword { layer: u32, n: u32 },

    #[error("list size {size} exceeds the cap {cap}")]
    ListCapExceeded { size: usize, cap: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

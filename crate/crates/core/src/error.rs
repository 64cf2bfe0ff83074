use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("exponent overflow in Laurent polynomial arithmetic")]
    ExponentOverflow,
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("zero scalar where a unit is required")]
    ZeroScalar,
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),
    #[error("determinant is not 1")]
    DeterminantNotOne,
    #[error("unitary example requires char ≠ 2")]
    CharacteristicTwo,
    #[error("matrix is not in the unipotent pattern: {0}")]
    NotUnipotent(String),
    #[error("support outside window [{lo}, {hi}]: index {index}")]
    OutsideWindow { lo: i64, hi: i64, index: i64 },
    #[error("inconsistent matrix entries: {0}")]
    InconsistentEntries(String),
    #[error("invalid window [{0}, {1}]")]
    InvalidWindow(i64, i64),
    #[error("window mismatch between group elements")]
    WindowMismatch,
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("resource cap exceeded: {what} would need {size} elements (cap {cap})")]
    CapExceeded { what: String, size: u64, cap: u64 },
    #[error("shift by {shift} leaves window [{lo}, {hi}]")]
    ShiftOutOfRange { shift: i64, lo: i64, hi: i64 },
    #[error("group is not nilpotent: lower central series stalls after {0} terms")]
    NotNilpotent(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("exponent k must be at least 2, got {0}")]
    ExponentTooSmall(u64),
    #[error("this quantity needs a power-residue exponent k")]
    MissingExponent,
    #[error("dimension n must be at least 1")]
    ZeroDimension,
    #[error("coordinate {value} is out of range for p = {p}")]
    CoordinateOutOfRange { value: u64, p: u32 },
    #[error("rank {rank} is out of range for p^n = {size}")]
    RankOutOfRange { rank: u64, size: u64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("forbidden set must contain 0")]
    MissingZero,
    #[error("t = {t} is out of range [1, {p}]")]
    TOutOfRange { t: u64, p: u32 },
    #[error("p^n = {p}^{n} exceeds the vertex limit of {limit}")]
    Capacity { p: u32, n: usize, limit: u64 },
    #[error("{0} is not congruent to 1 mod 4")]
    NotOneModFour(u32),
    #[error("candidate set is empty")]
    EmptySet,
    #[error("duplicate element at positions {0} and {1}")]
    Duplicate(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;

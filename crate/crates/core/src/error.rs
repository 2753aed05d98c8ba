use std::path::PathBuf;

use num_bigint::BigUint;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("factorization of {value} exceeded the budget of {budget} rho iterations")]
    FactorizationTimeout { value: BigUint, budget: u64 },

    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: String, modulus: String },

    #[error("hypothesis violated for p = {p}, q = {q}: {reason}")]
    HypothesisViolated { p: u64, q: u64, reason: String },

    #[error("operands belong to different rings")]
    ContextMismatch,

    #[error("{m} does not divide the group order q^n - 1")]
    NotADivisor { m: BigUint },

    #[error("the zero element has no multiplicative order")]
    ZeroElement,

    #[error("{q} is not inert in Q(sqrt({p}))")]
    NotInert { p: u64, q: u64 },

    #[error("{precision_bits} bits are not enough to certify h for p = {p} (distance to nearest integer {distance:e})")]
    PrecisionInsufficient {
        p: u64,
        precision_bits: usize,
        distance: f64,
    },

    #[error("no eventual period found within {max_steps} steps")]
    BudgetExhausted { max_steps: u64 },

    #[error("element does not satisfy g^N = 1 for the supplied group order")]
    OrderNotDividing,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("checkpoint {path} is corrupt: {reason}")]
    CheckpointCorrupt { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

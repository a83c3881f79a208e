use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at x = 0: {0}")]
    Pole(&'static str),

    #[error("pole residues do not cancel ({first} vs {second})")]
    ResidueMismatch { first: f64, second: f64 },

    #[error("order m = {m} outside the valid range {lo}..={hi}")]
    OrderOutOfRange { m: u64, lo: u64, hi: u64 },

    #[error("half-size parameter n must be >= 1")]
    EmptyFamily,

    #[error("chain size N = {0} outside the supported range {1}..={2}")]
    ChainSize(usize, usize, usize),

    #[error("operator is not real symmetric")]
    NotSymmetric,

    #[error("eigensolver did not converge (residual {0:e})")]
    NoConvergence(f64),

    #[error("ground state has no definite parity (<P> = {0})")]
    IndefiniteParity(f64),

    #[error("field shift delta = {0} outside [1e-4, 1e-2]")]
    ShiftOutOfRange(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

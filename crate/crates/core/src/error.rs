use thiserror::Error;

/// Errors produced by the numerics layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("site {site} is out of range for a chain of {len} sites")]
    SiteOutOfRange { site: usize, len: usize },

    #[error("vector of length {actual} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("degenerate bipartition: subsystem A holds {len_a} of {len} sites")]
    DegenerateBipartition { len: usize, len_a: usize },

    #[error("configuration {bits} does not fit in {len} sites")]
    ConfigOutOfRange { bits: u64, len: usize },

    #[error("strength {0} outside [0, 1/2]")]
    InvalidStrength(f64),

    #[error("{what} supports {min}..={max} sites, got {len}")]
    SizeOutOfRange {
        what: &'static str,
        len: usize,
        min: usize,
        max: usize,
    },

    #[error("Lanczos did not converge after {iterations} matrix-vector products (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("ground state is numerically degenerate: lowest Ritz gap {gap:e}")]
    DegenerateGroundState { gap: f64 },

    #[error("algorithm {algorithm} cannot be used here: {reason}")]
    AlgorithmMismatch {
        algorithm: &'static str,
        reason: String,
    },

    #[error("scaling fit is rank deficient: {0}")]
    RankDeficientFit(String),

    #[error("Rényi index must be at least 1, got {0}")]
    InvalidRenyiIndex(u32),

    #[error("purity {0:e} is not positive; the entropy is undefined")]
    NonPositivePurity(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ground-state cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

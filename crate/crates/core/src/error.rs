use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building, factoring or inverting a matrix.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: shape mismatch between {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op}: expected a square matrix, got {shape:?}")]
    NotSquare {
        op: &'static str,
        shape: (usize, usize),
    },

    #[error("matrix data length {len} does not match shape {rows}x{cols}")]
    DataLength { rows: usize, cols: usize, len: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid tolerance {name} = {value}: must lie in (0, 1)")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("svd did not converge after {sweeps} sweeps")]
    SvdNoConvergence { sweeps: usize },

    #[error("rank of powers did not stabilize within {cap} steps; rank tolerance too tight")]
    IndexNotStabilized { cap: usize },

    #[error("index of AW ({ind_aw}) and WA ({ind_wa}) differ by more than one; rank tolerance too tight")]
    IndexMismatch { ind_aw: usize, ind_wa: usize },

    #[error("subspaces are not complementary: [T S] has rank {rank}, need {dim}")]
    NonComplementary { rank: usize, dim: usize },

    #[error("weight matrix W must be nonzero")]
    ZeroWeight,

    #[error("order m must be at least {min}, got {m}")]
    InvalidOrder { m: usize, min: usize },

    #[error("{inverse} inverse does not exist: index {index} exceeds 1")]
    Nonexistent { inverse: &'static str, index: usize },

    #[error("method {method} is inapplicable: requires {condition}")]
    InapplicableMethod { method: String, condition: String },

    #[error("random pair cannot be built: {0}")]
    RandomSpec(String),

    #[error("verification of {name} failed: residual {residual:e} exceeds {tol:e}")]
    VerificationFailed {
        name: String,
        residual: f64,
        tol: f64,
    },

    #[error("unknown {kind} '{name}'")]
    UnknownName { kind: &'static str, name: String },

    #[error("matrix file: {0}")]
    MatrixFile(String),
}

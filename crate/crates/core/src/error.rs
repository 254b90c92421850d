//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix data has {len} entries, expected {rows}x{cols} = {expected}")]
    DataLength {
        rows: usize,
        cols: usize,
        len: usize,
        expected: usize,
    },

    #[error("matrix entries must be finite (found NaN or infinity)")]
    NonFinite,

    #[error(
        "shape mismatch: expected {expected_rows}x{expected_cols}, found {found_rows}x{found_cols}"
    )]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        found_rows: usize,
        found_cols: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error(
        "matrix is not Hermitian (max deviation {deviation:.3e} exceeds tolerance {tolerance:.3e})"
    )]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.3e} below -{tolerance:.3e})")]
    NotPositive { min_eigenvalue: f64, tolerance: f64 },

    #[error("eigensolver failed to converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("operator family is empty")]
    EmptyFamily,

    #[error("Kraus set must contain at least one operator")]
    EmptyKraus,

    #[error("tolerance {value} out of range (must satisfy 0 < tol < 1)")]
    ToleranceRange { value: f64 },

    #[error("operator is not unitary (max |U\u{2020}U - I| = {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("mixture weights must sum to 1 (got {sum})")]
    WeightSum { sum: f64 },

    #[error("mixture weight {weight} at index {index} is negative")]
    NegativeWeight { index: usize, weight: f64 },

    #[error("got {weights} weights for {channels} channels")]
    WeightCount { channels: usize, weights: usize },

    #[error("Kraus rank {rank} out of range (must satisfy {min} <= rank <= {max})")]
    KrausRankRange { rank: usize, min: usize, max: usize },

    #[error("Kraus operators are linearly dependent; extract a minimal set via the Choi transform first")]
    DependentKraus,

    #[error("channel must have equal input and output dimensions (got {dim_in} -> {dim_out})")]
    NotSquareChannel { dim_in: usize, dim_out: usize },

    #[error("dimension must be at least 1 (got {dim})")]
    InvalidDimension { dim: usize },

    #[error("unknown builtin channel `{name}`")]
    UnknownBuiltin { name: String },
}

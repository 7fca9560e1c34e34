//! Exact sparse linear algebra and minimal-norm filling problems.

pub mod dense;
mod fill;
pub mod simplex;
mod sparse;

pub use fill::{
    operator_norm, solve_min, solve_min_l1, solve_min_linf, FillResult, FillStatus, Norm,
    OperatorNorm,
};
pub(crate) use fill::{solve_weighted_l1, solve_weighted_linf};
pub use sparse::{MatrixError, SparseMat, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("right-hand side label `{0}` is not a row of the matrix")]
    LabelMismatch(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

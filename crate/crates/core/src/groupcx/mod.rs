//! Group-theoretic complexes: truncated bar complexes of free groups,
//! bounded cochains of finite groups, Shapiro maps and alternation.

mod bar;
mod cochains;
mod finite;
mod words;

use thiserror::Error;

use crate::exactlp::MatrixError;
use crate::normcx::ComplexError;

pub use bar::{
    bar_basis, bar_complex, bar_faces, f2_experiment, records_to_csv, tuple_label, BarTuple,
    ExperimentRecord, F2Config, CSV_HEADER,
};
pub use cochains::{
    alternating_projection, finite_group_bounded_cochains, shapiro_maps, InvariantCochains,
    ShapiroMaps, ShapiroReport,
};
pub use finite::FiniteGroupData;
pub use words::{ball, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("{0}")]
    Input(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("the given elements do not form a subgroup")]
    NotASubgroup,
    #[error("face {1} of {0} lies outside the truncated basis")]
    Closure(String, String),
    #[error("certificate check failed in trial {0}")]
    Certificate(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

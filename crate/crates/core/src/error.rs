use thiserror::Error;

use crate::expr::ExprError;
use crate::tensorlab::LinalgError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("complex dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("point {point:?} lies outside the chart: {reason}")]
    OutsideChart { point: Vec<f64>, reason: String },
    #[error("immersion needs {expected} components, found {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("jacobian is rank deficient at {point:?}")]
    RankDeficient { point: Vec<f64> },
    #[error("unknown builtin immersion `{0}`")]
    UnknownBuiltin(String),
    #[error("builtin `{builtin}` requires {requirement}")]
    BuiltinMismatch {
        builtin: String,
        requirement: String,
    },
    #[error("vector is not tangent (normal component {residual:e})")]
    NotTangent { residual: f64 },
    #[error("precondition violated: {what} (measured {measured:e})")]
    Precondition { what: String, measured: f64 },
    #[error("hypothesis violated: (Σx)² = {lhs}, (n-1)(Σx² + b) = {rhs}")]
    LemmaHypothesis { lhs: f64, rhs: f64 },
    #[error("submanifold is not slant (classified as {class})")]
    NotSlant { class: String },
    #[error("tangent space is not CR: spectrum of TᵀT = {spectrum:?}")]
    NotCr { spectrum: Vec<f64> },
    #[error("{0}")]
    Unsupported(String),
}

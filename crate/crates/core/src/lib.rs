//! Numerical tensor calculus on Kaehler model spaces.
//!
//! The crate evaluates curvature identities and inequalities for
//! submanifolds of complex space forms at concrete chart points:
//!
//! * [`expr`]: a small expression language with dual-number derivatives,
//!   used to define immersions.
//! * [`tensorlab`]: dense linear algebra for frames and metrics.
//! * [`ambient`]: flat, Fubini–Study and complex hyperbolic charts.
//! * [`bochner`]: the `L`/`M` tensors and curvature reconstruction.
//! * [`submanifold`]: induced geometry, second fundamental form, Gauss and
//!   Codazzi residuals, slant classification.
//! * [`chen`]: Chen-type inequalities, their equality cases and corollaries.
//! * [`crwarp`]: CR-warped product structure and bounds.
//!
//! Geometry is generic over the floating point type through
//! [`scalar::Real`]; the `*64` aliases below fix it to `f64`.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod ambient;
pub mod bochner;
pub mod chen;
pub mod crwarp;
pub mod error;
pub mod expr;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod submanifold;
pub mod tensorlab;

pub use ambient::{AmbientKind, AmbientSpace, CurvatureData};
pub use error::{Error, Result};
pub use expr::{parse, Expr, ExprError};
pub use report::{CheckEntry, CheckReport, EntryKind};
pub use scalar::{Dual, Real, Scalar};
pub use tensorlab::{Christoffel, LinalgError, Mat, MetricMatrix, Tensor4};

pub type Mat64 = Mat<f64>;
pub type MetricMatrix64 = MetricMatrix<f64>;
pub type Christoffel64 = Christoffel<f64>;
pub type Tensor4_64 = Tensor4<f64>;
pub type CurvatureData64 = CurvatureData<f64>;
pub type BochnerTensors64 = bochner::BochnerTensors<f64>;
pub type AdaptedFrame64 = submanifold::AdaptedFrame<f64>;
pub type ExtrinsicData64 = submanifold::ExtrinsicData<f64>;
pub type ChenTerms64 = chen::ChenTerms<f64>;

pub type Mat32 = Mat<f32>;
pub type MetricMatrix32 = MetricMatrix<f32>;
pub type CurvatureData32 = CurvatureData<f32>;

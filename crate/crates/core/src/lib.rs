//! Detection of likely-to-leave team members in co-authorship networks and
//! ranking of replacement candidates by a random-walk graph-kernel score.
//!
//! Numeric code is generic over the scalar (any [`scalar::Real`], i.e. f32
//! or f64); the aliases below pin the common concrete choices.

pub mod corpus;
pub mod error;
pub mod familiarity;
pub mod kernel;
pub mod linalg;
pub mod metrics;
pub mod motifs;
pub mod numfmt;
pub mod scalar;
pub mod synth;

pub use error::{Error, Result};

/// Double-precision dense square matrix.
pub type Matrix64 = linalg::SquareMatrix<f64>;
/// Single-precision dense square matrix.
pub type Matrix32 = linalg::SquareMatrix<f32>;
/// Double-precision diagonal matrix.
pub type Diagonal64 = linalg::Diagonal<f64>;
/// Single-precision diagonal matrix.
pub type Diagonal32 = linalg::Diagonal<f32>;
/// Double-precision solver options.
pub type SolveOptions64 = linalg::SolveOptions<f64>;
/// Double-precision member familiarity/outlierness score.
pub type FamiliarityScore64 = familiarity::FamiliarityScore<f64>;
/// Double-precision kernel scoring problem.
pub type KernelProblem64 = kernel::KernelProblem<f64>;
/// Double-precision recommendation options.
pub type RecommendOptions64 = kernel::RecommendOptions<f64>;
/// Double-precision ranked recommendation.
pub type Recommendation64 = kernel::Recommendation<f64>;
/// Double-precision evaluation options.
pub type EvaluateOptions64 = metrics::EvaluateOptions<f64>;
/// Double-precision evaluation report.
pub type EvaluationReport64 = metrics::EvaluationReport<f64>;

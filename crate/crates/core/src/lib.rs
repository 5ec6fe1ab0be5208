//! Comparison geometry under integral bounds on the generalized quasi-Einstein
//! tensor `Ric + Hess f - mu df ⊗ df`.
//!
//! The crate evaluates the model-space geometry and explicit comparison
//! constants, represents weighted rotationally symmetric spaces with exact
//! curvature, computes weighted integral norms, and checks each comparison
//! inequality numerically with a structured report.
//!
//! Numerical kernels are generic over [`Real`] (`f32`, `f64`); the `*64`
//! aliases fix the scalar to `f64`, which is what the reports and the CLI use.

// Comparisons are written as `!(x > y)` so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli_runner;
pub mod error;
pub mod integral_norms;
pub mod model_space;
pub mod scalar;
pub mod theorem_checks;
pub mod warped_manifold;

pub use error::{Error, Result};
pub use integral_norms::{
    integrate_adaptive, integrate_graded, kbar, weighted_lp_norm, Estimate, QuadratureSpec, RadialGrid,
};
pub use model_space::{
    annulus_comparison_constant, area_comparison_constant, doubling_epsilon, excess_threshold,
    generalized_sine, volume_comparison_constant, AnnulusRadii, ConstantRequest, ModelParams,
};
pub use scalar::Real;
pub use warped_manifold::{BuiltinFamily, DeficitProfile, Profile, WarpedSpace};

pub type ModelParams64 = ModelParams<f64>;
pub type ConstantRequest64 = ConstantRequest<f64>;
pub type AnnulusRadii64 = AnnulusRadii<f64>;
pub type WarpedSpace64 = WarpedSpace<f64>;
pub type BuiltinFamily64 = BuiltinFamily<f64>;
pub type DeficitProfile64 = DeficitProfile<f64>;
pub type RadialGrid64 = RadialGrid<f64>;
pub type QuadratureSpec64 = QuadratureSpec<f64>;

//! Bayesian nonparametric co-clustering of ordinal data with informative
//! missingness: model types, prior combinatorics, the Gibbs sampler,
//! post-processing and a synthetic-data generator.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the double-precision versions.

pub mod error;
pub mod gibbs;
pub mod inference;
pub mod linalg;
pub mod model;
pub mod prior;
pub mod random;
pub mod scalar;
pub mod simulate;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Real;

/// Probabilities are floored here before logarithms are taken.
pub const PROB_FLOOR: f64 = 1e-300;

pub type Cutoffs64 = model::Cutoffs<f64>;
pub type ModelConfig64 = model::ModelConfig<f64>;
pub type BaseMeasure64 = model::BaseMeasure<f64>;
pub type SigmaMode64 = model::SigmaMode<f64>;
pub type LatentState64 = model::LatentState<f64>;
pub type Factor64 = model::Factor<f64>;
pub type ChainOutput64 = gibbs::ChainOutput<f64>;
pub type UrnWeights64 = gibbs::UrnWeights<f64>;
pub type ConfigTemplate64 = inference::ConfigTemplate<f64>;
pub type BivariateClusterPrior64 = prior::BivariateClusterPrior<f64>;

pub type Cutoffs32 = model::Cutoffs<f32>;
pub type ModelConfig32 = model::ModelConfig<f32>;
pub type LatentState32 = model::LatentState<f32>;
pub type ChainOutput32 = gibbs::ChainOutput<f32>;

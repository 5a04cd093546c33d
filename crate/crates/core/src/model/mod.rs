//! Data model: observations, cutoffs, hyperparameters, the augmented MCMC
//! state, partitions and the pointwise likelihood.

mod config;
mod cutoffs;
mod data;
mod likelihood;
mod partition;
mod state;

pub use config::{Axis, BaseMeasure, ModelConfig, SigmaMode};
pub use cutoffs::{make_default_cutoffs, Cutoffs};
pub use data::{OrdinalDataset, CENSORED_SENTINEL};
pub use likelihood::{entry_likelihood, state_entry_likelihoods};
pub use partition::{canonicalize, Partition};
pub use state::{AxisState, Factor, Initialization, LatentState};

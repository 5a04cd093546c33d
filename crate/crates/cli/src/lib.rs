//! Batch front end for co-clustering of censored ordinal data: simulation,
//! fitting, choice of the latent dimension, evaluation against known truth
//! and the prior on the number of co-clusters.

pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;
pub mod manifest;

pub use error::{CliError, Result};
pub use manifest::RunManifest;

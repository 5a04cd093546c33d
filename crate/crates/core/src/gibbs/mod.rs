//! Gibbs sampler: latent augmentation, urn allocation, reshuffling and
//! variance updates.

mod conjugate;
mod latent;
mod reshuffle;
mod sigma;
mod sweep;
mod truncnorm;
mod urn;

pub use latent::{update_w, update_w_streamed, update_z, update_z_streamed};
pub use reshuffle::{reshuffle, reshuffle_cols, reshuffle_rows};
pub use sigma::update_sigmas;
pub use sweep::{gibbs_sweep, gibbs_sweep_with, run_chain, run_chain_from, ChainOutput, GibbsControls};
pub use truncnorm::sample_truncnorm;
pub use urn::{sample_base, sample_base_col, sample_base_row, urn_pass, urn_weights, urn_weights_col, urn_weights_row, UrnWeights};

//! Chain post-processing: similarity, partition point estimate, ARI/BARI,
//! LPML and the choice of the latent dimension.

mod lpml;
mod metrics;
mod select;
mod similarity;
mod vi;

pub use lpml::{lpml, CpoAccumulator};
pub use metrics::{ari, bari};
pub use select::{select_d, ConfigTemplate, LpmlReport};
pub use similarity::{posterior_similarity, SimilarityMatrix};
pub use vi::{vi_lower_bound, vi_point_estimate};

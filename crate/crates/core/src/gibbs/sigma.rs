//! Residual-variance updates under inverse-gamma hyperpriors.

use rand::Rng;

use crate::error::Result;
use crate::model::{LatentState, ModelConfig, SigmaMode};
use crate::random::inverse_gamma;
use crate::scalar::Real;

/// Half the residual sum of squares of latent column `r`.
fn half_rss<T: Real>(state: &LatentState<T>, r: usize) -> T {
    let means = state.factor_means(r);
    let x = state.latent(r);
    let rss: T = x.as_slice().iter().zip(means.as_slice()).map(|(&a, &m)| (a - m) * (a - m)).sum();
    rss * T::of(0.5)
}

/// Draws `σ₁², σ₂²` from their inverse-gamma full conditionals; a no-op when
/// the variances are fixed.
pub fn update_sigmas<T: Real, R: Rng + ?Sized>(state: &mut LatentState<T>, config: &ModelConfig<T>, rng: &mut R) -> Result<()> {
    let SigmaMode::Hyperprior { shape1, rate1, shape2, rate2 } = *config.sigma() else {
        return Ok(());
    };
    let half_np = T::of_usize(state.n() * state.p()) * T::of(0.5);
    let s1 = inverse_gamma(rng, shape1 + half_np, rate1 + half_rss(state, 0))?;
    let s2 = inverse_gamma(rng, shape2 + half_np, rate2 + half_rss(state, 1))?;
    state.set_sigmas(s1, s2);
    Ok(())
}

//! Data-augmentation updates for the ordinal latent `z` and the censoring
//! latent `w`. Entries are conditionally independent, so every entry draws
//! from its own stream keyed by `(sweep seed, column, i, j)`; serial and
//! parallel execution give identical states.

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use super::truncnorm::{fit_into, std_truncnorm};
use crate::error::{Error, Result};
use crate::model::{Cutoffs, LatentState, OrdinalDataset};
use crate::random::derive_seed;
use crate::scalar::Real;

fn entry_rng(seed: u64, r: usize, i: usize, j: usize) -> SmallRng {
    SmallRng::seed_from_u64(derive_seed(seed, &[r as u64, i as u64, j as u64]))
}

fn check_dims<T: Real>(state: &LatentState<T>, data: &OrdinalDataset) -> Result<()> {
    if (state.n(), state.p()) != (data.n(), data.p()) {
        return Err(Error::invalid("state and data dimensions differ"));
    }
    Ok(())
}

/// Redraws `z`: truncated to the observed cell when `δ = 1`, unrestricted
/// normal when `δ = 0`.
pub fn update_z<T: Real, R: Rng + ?Sized>(
    state: &mut LatentState<T>,
    data: &OrdinalDataset,
    cutoffs: &Cutoffs<T>,
    rng: &mut R,
) -> Result<()> {
    let seed = rng.random();
    update_z_streamed(state, data, cutoffs, seed, false)
}

/// Redraws `w`: restricted to `[0, ∞)` when `δ = 1` and `(-∞, 0)` when `δ = 0`.
pub fn update_w<T: Real, R: Rng + ?Sized>(state: &mut LatentState<T>, data: &OrdinalDataset, rng: &mut R) -> Result<()> {
    let seed = rng.random();
    update_w_streamed(state, data, seed, false)
}

pub fn update_z_streamed<T: Real>(
    state: &mut LatentState<T>,
    data: &OrdinalDataset,
    cutoffs: &Cutoffs<T>,
    seed: u64,
    parallel: bool,
) -> Result<()> {
    check_dims(state, data)?;
    let means = state.factor_means(0);
    let sd = state.sigma1_sq().f64().sqrt();
    let p = data.p();
    let fill = |(i, row): (usize, &mut [T])| {
        for (j, z) in row.iter_mut().enumerate() {
            let mut rng = entry_rng(seed, 0, i, j);
            let m = means[(i, j)].f64();
            if data.observed(i, j) {
                let (lo, hi) = cutoffs.cell(data.y(i, j));
                let x = m + sd * std_truncnorm((lo.f64() - m) / sd, (hi.f64() - m) / sd, &mut rng);
                *z = fit_into(T::of(x), lo, hi);
            } else {
                let e: f64 = rng.sample(rand_distr::StandardNormal);
                *z = T::of(m + sd * e);
            }
        }
    };
    let (z, _) = state.latents_mut();
    if parallel {
        z.as_mut_slice().par_chunks_mut(p).enumerate().for_each(fill);
    } else {
        z.as_mut_slice().chunks_mut(p).enumerate().for_each(fill);
    }
    Ok(())
}

pub fn update_w_streamed<T: Real>(state: &mut LatentState<T>, data: &OrdinalDataset, seed: u64, parallel: bool) -> Result<()> {
    check_dims(state, data)?;
    let means = state.factor_means(1);
    let sd = state.sigma2_sq().f64().sqrt();
    let p = data.p();
    let fill = |(i, row): (usize, &mut [T])| {
        for (j, w) in row.iter_mut().enumerate() {
            let mut rng = entry_rng(seed, 1, i, j);
            let m = means[(i, j)].f64();
            let a = -m / sd;
            *w = if data.observed(i, j) {
                let x = m + sd * std_truncnorm(a, f64::INFINITY, &mut rng);
                T::of(x).max(T::zero())
            } else {
                let x = T::of(m + sd * std_truncnorm(f64::NEG_INFINITY, a, &mut rng));
                if x < T::zero() {
                    x
                } else {
                    -T::min_positive_value()
                }
            };
        }
    };
    let (_, w) = state.latents_mut();
    if parallel {
        w.as_mut_slice().par_chunks_mut(p).enumerate().for_each(fill);
    } else {
        w.as_mut_slice().chunks_mut(p).enumerate().for_each(fill);
    }
    Ok(())
}

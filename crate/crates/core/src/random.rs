//! Sampling helpers shared by the sampler and the simulator.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::scalar::Real;

#[inline]
pub fn std_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    let x: f64 = StandardNormal.sample(rng);
    T::of(x)
}

pub fn std_normal_vec<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<T> {
    (0..d).map(|_| std_normal(rng)).collect()
}

/// Draws from `N(mean, cov)` given the Cholesky factor of `cov`.
pub fn mvn_from_cov<T: Real, R: Rng + ?Sized>(rng: &mut R, mean: &[T], cov_chol: &Cholesky<T>) -> Vec<T> {
    let eps = std_normal_vec(rng, mean.len());
    let shift = cov_chol.lower_mul(&eps);
    mean.iter().zip(shift).map(|(&m, s)| m + s).collect()
}

/// Draws from `N(P⁻¹ b, P⁻¹)` given the Cholesky factor of the precision `P`.
pub fn mvn_canonical<T: Real, R: Rng + ?Sized>(rng: &mut R, prec_chol: &Cholesky<T>, b: &[T]) -> Vec<T> {
    let mean = prec_chol.solve(b);
    let eps = std_normal_vec(rng, b.len());
    // L⁻ᵀ ε has covariance (L Lᵀ)⁻¹
    let shift = prec_chol.solve_upper(&eps);
    mean.into_iter().zip(shift).map(|(m, s)| m + s).collect()
}

pub fn mvn_dense<T: Real, R: Rng + ?Sized>(rng: &mut R, mean: &[T], cov: &Matrix<T>) -> Result<Vec<T>> {
    let chol = Cholesky::new(cov)?;
    Ok(mvn_from_cov(rng, mean, &chol))
}

/// `IG(shape, rate)` draw, i.e. the reciprocal of a `Gamma(shape, 1/rate)` variate.
pub fn inverse_gamma<T: Real, R: Rng + ?Sized>(rng: &mut R, shape: T, rate: T) -> Result<T> {
    let g = Gamma::new(shape.f64(), 1.0 / rate.f64())
        .map_err(|e| Error::invalid(format!("bad inverse-gamma parameters ({shape}, {rate}): {e}")))?;
    Ok(T::of(1.0 / g.sample(rng)))
}

/// Index drawn proportionally to `exp(log_w)`.
pub fn categorical_log<T: Real, R: Rng + ?Sized>(rng: &mut R, log_w: &[T]) -> usize {
    let max = log_w.iter().copied().fold(T::neg_infinity(), T::max);
    let w: Vec<f64> = log_w.iter().map(|&l| (l - max).f64().exp()).collect();
    let total: f64 = w.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (k, &wk) in w.iter().enumerate() {
        if u < wk {
            return k;
        }
        u -= wk;
    }
    // rounding: fall back to the last index with positive weight
    w.iter().rposition(|&x| x > 0.0).unwrap_or(0)
}

/// SplitMix64 finalizer, used to derive independent stream seeds.
#[inline]
pub fn mix_seed(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix_seed(base), |acc, &p| mix_seed(acc ^ mix_seed(p)))
}

//! Sufficient statistics shared by the urn and reshuffling updates.
//!
//! For an item on `axis` and a factor column `r`, the latents of that item
//! are `x_o = θᵀφ_{m(o)} + ε_o` over the other axis, where `φ_m` is the
//! other axis's distinct value of cluster `m`. Everything the conditionals
//! need reduces to `xᵀx` and the per-cluster sums `s_m = Σ_{o ∈ m} x_o`.

use crate::error::Result;
use crate::linalg::{dot, Cholesky, Matrix};
use crate::model::{Axis, LatentState, ModelConfig};
use crate::scalar::Real;

pub(crate) struct ColumnStats<T> {
    sigma_sq: T,
    lambda0: Matrix<T>,
    lambda_m: Vec<T>,
    m_lambda_m: T,
    log_det_prior_cov: T,
    /// `Σ_m |m| φ_m φ_mᵀ / σ²`
    gram: Matrix<T>,
    others: Vec<Vec<T>>,
    other_sizes: Vec<T>,
    n_other: usize,
    xx: Vec<T>,
    /// items x other-axis clusters
    sums: Matrix<T>,
}

impl<T: Real> ColumnStats<T> {
    pub(crate) fn new(state: &LatentState<T>, config: &ModelConfig<T>, axis: Axis, r: usize) -> Self {
        let base = config.base(axis);
        let other = state.axis(axis.other());
        let sigma_sq = state.sigma_sq(r);
        let lambda0 = base.precision(r);
        let lambda_m = lambda0.mat_vec(base.mean(r));
        let m_lambda_m = dot(base.mean(r), &lambda_m);
        let d = state.d();
        let others: Vec<Vec<T>> = other.stars().iter().map(|f| f.col(r).to_vec()).collect();
        let other_sizes: Vec<T> = other.sizes().iter().map(|&s| T::of_usize(s)).collect();
        let mut gram = Matrix::zeros(d, d);
        for (phi, &size) in others.iter().zip(&other_sizes) {
            gram.add_outer(phi, size / sigma_sq);
        }

        let x = state.latent(r);
        let n_items = state.axis(axis).len();
        let mut xx = vec![T::zero(); n_items];
        let mut sums = Matrix::zeros(n_items, others.len());
        let other_labels = other.labels();
        for i in 0..state.n() {
            for (j, &v) in x.row(i).iter().enumerate() {
                let (item, o) = match axis {
                    Axis::Rows => (i, j),
                    Axis::Cols => (j, i),
                };
                xx[item] += v * v;
                sums.row_mut(item)[other_labels[o]] += v;
            }
        }
        Self {
            sigma_sq,
            lambda0,
            lambda_m,
            m_lambda_m,
            log_det_prior_cov: base.log_det_cov(r),
            gram,
            others,
            other_sizes,
            n_other: other.len(),
            xx,
            sums,
        }
    }

    /// Cholesky factor of `Λ₀ + count · G / σ²`.
    pub(crate) fn precision(&self, count: usize) -> Result<Cholesky<T>> {
        let mut p = self.lambda0.clone();
        p.add_scaled(&self.gram, T::of_usize(count));
        Cholesky::new(&p)
    }

    /// `Λ₀ m + Σ_{i ∈ items} Σ_m φ_m s_im / σ²`
    pub(crate) fn linear_term(&self, items: &[usize]) -> Vec<T> {
        let mut b = self.lambda_m.clone();
        for (m, phi) in self.others.iter().enumerate() {
            let s: T = items.iter().map(|&i| self.sums[(i, m)]).sum::<T>() / self.sigma_sq;
            for (bk, &pk) in b.iter_mut().zip(phi) {
                *bk += pk * s;
            }
        }
        b
    }

    fn log_norm_const(&self) -> T {
        -T::of(0.5) * T::of_usize(self.n_other) * (T::TAU() * self.sigma_sq).ln()
    }

    /// `Σ_o log N(x_o; θᵀφ_{m(o)}, σ²)` for item `i`.
    pub(crate) fn log_lik(&self, i: usize, theta: &[T]) -> T {
        let two = T::of(2.0);
        let mut quad = self.xx[i];
        for (m, phi) in self.others.iter().enumerate() {
            let q = dot(theta, phi);
            quad += self.other_sizes[m] * q * q - two * q * self.sums[(i, m)];
        }
        self.log_norm_const() - quad / (two * self.sigma_sq)
    }

    /// Log density of item `i`'s latents with `θ` integrated against the base
    /// measure; `prec` must be [`precision(1)`](Self::precision).
    pub(crate) fn log_marginal(&self, i: usize, prec: &Cholesky<T>) -> T {
        let b = self.linear_term(&[i]);
        let half = T::of(0.5);
        self.log_norm_const()
            - half * (self.log_det_prior_cov + prec.log_det())
            - half * (self.xx[i] / self.sigma_sq + self.m_lambda_m - prec.inv_quad(&b))
    }
}

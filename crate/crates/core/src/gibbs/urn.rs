//! Generalized Pólya-urn allocation of rows and columns to clusters.

use rand::Rng;

use super::conjugate::ColumnStats;
use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::model::{Axis, Factor, LatentState, ModelConfig};
use crate::special::log_add_exp;
use crate::random::{categorical_log, mvn_canonical};
use crate::scalar::Real;

/// Unnormalized log allocation weights of one item, with the item itself
/// left out of the cluster counts.
#[derive(Debug, Clone, PartialEq)]
pub struct UrnWeights<T> {
    /// New-cluster option.
    pub log_w0: T,
    /// One entry per cluster that stays non-empty without the item.
    pub log_w: Vec<T>,
    /// Index into the current distinct values for each entry of `log_w`.
    pub clusters: Vec<usize>,
}

impl<T: Real> UrnWeights<T> {
    /// Normalized probabilities, existing clusters first and the new-cluster
    /// option last.
    pub fn probabilities(&self) -> Vec<T> {
        let z = self.log_w.iter().fold(self.log_w0, |acc, &l| log_add_exp(acc, l));
        self.log_w.iter().chain(std::iter::once(&self.log_w0)).map(|&l| (l - z).exp()).collect()
    }

    fn check(&self, axis: Axis, item: usize) -> Result<()> {
        if self.log_w.iter().chain(std::iter::once(&self.log_w0)).all(|l| l.is_finite()) {
            Ok(())
        } else {
            Err(Error::NumericalFailure {
                iteration: 0,
                context: format!("non-finite urn weight for {axis:?} item {item}"),
            })
        }
    }
}

/// Conjugate quantities that stay fixed while one axis is being swept.
struct AxisContext<T> {
    stats: [ColumnStats<T>; 2],
    prec: [Cholesky<T>; 2],
    log_alpha: T,
    log_denom: T,
}

impl<T: Real> AxisContext<T> {
    fn new(state: &LatentState<T>, config: &ModelConfig<T>, axis: Axis) -> Result<Self> {
        let stats = [ColumnStats::new(state, config, axis, 0), ColumnStats::new(state, config, axis, 1)];
        let prec = [stats[0].precision(1)?, stats[1].precision(1)?];
        let alpha = config.alpha(axis);
        let n = state.axis(axis).len();
        Ok(Self {
            stats,
            prec,
            log_alpha: alpha.ln(),
            log_denom: (alpha + T::of_usize(n) - T::one()).ln(),
        })
    }

    fn weights(&self, state: &LatentState<T>, axis: Axis, item: usize) -> UrnWeights<T> {
        let ax = state.axis(axis);
        let own = ax.labels()[item];
        let mut log_w = Vec::with_capacity(ax.k());
        let mut clusters = Vec::with_capacity(ax.k());
        for (l, (star, &size)) in ax.stars().iter().zip(ax.sizes()).enumerate() {
            let count = size - usize::from(l == own);
            if count == 0 {
                continue;
            }
            let ll = self.stats[0].log_lik(item, star.col(0)) + self.stats[1].log_lik(item, star.col(1));
            log_w.push(T::of_usize(count).ln() - self.log_denom + ll);
            clusters.push(l);
        }
        let marginal = self.stats[0].log_marginal(item, &self.prec[0]) + self.stats[1].log_marginal(item, &self.prec[1]);
        UrnWeights { log_w0: self.log_alpha - self.log_denom + marginal, log_w, clusters }
    }

    fn draw_new<R: Rng + ?Sized>(&self, item: usize, rng: &mut R) -> Result<Factor<T>> {
        let c0 = mvn_canonical(rng, &self.prec[0], &self.stats[0].linear_term(&[item]));
        let c1 = mvn_canonical(rng, &self.prec[1], &self.stats[1].linear_term(&[item]));
        Factor::new(c0, c1)
    }
}

fn check_item<T: Real>(state: &LatentState<T>, axis: Axis, item: usize) -> Result<()> {
    if item >= state.axis(axis).len() {
        return Err(Error::invalid(format!("{axis:?} index {item} out of range")));
    }
    Ok(())
}

/// Allocation weights for any item of `axis`.
pub fn urn_weights<T: Real>(
    axis: Axis,
    item: usize,
    state: &LatentState<T>,
    config: &ModelConfig<T>,
) -> Result<UrnWeights<T>> {
    check_item(state, axis, item)?;
    let w = AxisContext::new(state, config, axis)?.weights(state, axis, item);
    w.check(axis, item)?;
    Ok(w)
}

pub fn urn_weights_row<T: Real>(i: usize, state: &LatentState<T>, config: &ModelConfig<T>) -> Result<UrnWeights<T>> {
    urn_weights(Axis::Rows, i, state, config)
}

pub fn urn_weights_col<T: Real>(j: usize, state: &LatentState<T>, config: &ModelConfig<T>) -> Result<UrnWeights<T>> {
    urn_weights(Axis::Cols, j, state, config)
}

/// Draw of a fresh distinct value from the conjugate posterior given the
/// item's own latents.
pub fn sample_base<T: Real, R: Rng + ?Sized>(
    axis: Axis,
    item: usize,
    state: &LatentState<T>,
    config: &ModelConfig<T>,
    rng: &mut R,
) -> Result<Factor<T>> {
    check_item(state, axis, item)?;
    AxisContext::new(state, config, axis)?.draw_new(item, rng)
}

pub fn sample_base_row<T: Real, R: Rng + ?Sized>(
    i: usize,
    state: &LatentState<T>,
    config: &ModelConfig<T>,
    rng: &mut R,
) -> Result<Factor<T>> {
    sample_base(Axis::Rows, i, state, config, rng)
}

pub fn sample_base_col<T: Real, R: Rng + ?Sized>(
    j: usize,
    state: &LatentState<T>,
    config: &ModelConfig<T>,
    rng: &mut R,
) -> Result<Factor<T>> {
    sample_base(Axis::Cols, j, state, config, rng)
}

/// Sequentially reallocates every item of `axis`.
pub fn urn_pass<T: Real, R: Rng + ?Sized>(
    axis: Axis,
    state: &mut LatentState<T>,
    config: &ModelConfig<T>,
    rng: &mut R,
) -> Result<()> {
    // the other axis and the latents do not move during the pass
    let ctx = AxisContext::new(state, config, axis)?;
    for item in 0..state.axis(axis).len() {
        let w = ctx.weights(state, axis, item);
        w.check(axis, item)?;
        let mut log_all = w.log_w.clone();
        log_all.push(w.log_w0);
        let pick = categorical_log(rng, &log_all);
        if pick == w.clusters.len() {
            let value = ctx.draw_new(item, rng)?;
            let ax = state.axis_mut(axis);
            ax.detach(item);
            ax.attach_new(item, value);
        } else {
            let ax = state.axis_mut(axis);
            let own = ax.labels()[item];
            let was_singleton = ax.sizes()[own] == 1;
            let last = ax.k() - 1;
            let mut target = w.clusters[pick];
            ax.detach(item);
            // detaching a singleton moves the last cluster into its slot
            if was_singleton && target == last {
                target = own;
            }
            ax.attach(item, target);
        }
    }
    Ok(())
}

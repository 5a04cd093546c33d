use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{dot, Cholesky, Matrix};
use crate::model::{Axis, BaseMeasure, Cutoffs, ModelConfig, OrdinalDataset};
use crate::random::mvn_from_cov;
use crate::scalar::Real;

/// A `d x 2` factor matrix stored by columns: column 0 drives the ordinal
/// latent `z`, column 1 the censoring latent `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor<T> {
    cols: [Vec<T>; 2],
}

impl<T: Real> Factor<T> {
    pub fn new(col0: Vec<T>, col1: Vec<T>) -> Result<Self> {
        if col0.len() != col1.len() || col0.is_empty() {
            return Err(Error::invalid("factor columns must have equal non-zero length"));
        }
        Ok(Self { cols: [col0, col1] })
    }

    pub fn d(&self) -> usize {
        self.cols[0].len()
    }

    #[inline]
    pub fn col(&self, r: usize) -> &[T] {
        &self.cols[r]
    }

    pub fn col_mut(&mut self, r: usize) -> &mut Vec<T> {
        &mut self.cols[r]
    }

    /// Draws both columns independently from the base measure.
    pub fn draw_prior<R: Rng + ?Sized>(base: &BaseMeasure<T>, rng: &mut R) -> Result<Self> {
        let mut cols: [Vec<T>; 2] = [Vec::new(), Vec::new()];
        for (r, col) in cols.iter_mut().enumerate() {
            let chol = Cholesky::new(&base.v().scaled(base.u(r)))?;
            *col = mvn_from_cov(rng, base.mean(r), &chol);
        }
        Ok(Self { cols })
    }
}

/// Cluster assignments and distinct factor values along one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisState<T> {
    labels: Vec<usize>,
    stars: Vec<Factor<T>>,
    sizes: Vec<usize>,
}

const UNASSIGNED: usize = usize::MAX;

impl<T: Real> AxisState<T> {
    pub fn new(labels: Vec<usize>, stars: Vec<Factor<T>>) -> Result<Self> {
        let mut sizes = vec![0usize; stars.len()];
        for &l in &labels {
            if l >= stars.len() {
                return Err(Error::invalid(format!("label {l} has no distinct value")));
            }
            sizes[l] += 1;
        }
        if sizes.iter().any(|&s| s == 0) {
            return Err(Error::invalid("every distinct value needs at least one member"));
        }
        Ok(Self { labels, stars, sizes })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn stars(&self) -> &[Factor<T>] {
        &self.stars
    }

    pub fn stars_mut(&mut self) -> &mut [Factor<T>] {
        &mut self.stars
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn k(&self) -> usize {
        self.stars.len()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn factor_of(&self, item: usize) -> &Factor<T> {
        &self.stars[self.labels[item]]
    }

    /// Members of each cluster, in item order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); self.k()];
        for (item, &l) in self.labels.iter().enumerate() {
            m[l].push(item);
        }
        m
    }

    /// Takes `item` out of its cluster; a cluster left empty is deleted.
    pub(crate) fn detach(&mut self, item: usize) {
        let l = self.labels[item];
        self.labels[item] = UNASSIGNED;
        self.sizes[l] -= 1;
        if self.sizes[l] == 0 {
            let last = self.stars.len() - 1;
            self.stars.swap_remove(l);
            self.sizes.swap_remove(l);
            if l != last {
                for lab in self.labels.iter_mut() {
                    if *lab == last {
                        *lab = l;
                    }
                }
            }
        }
    }

    pub(crate) fn attach(&mut self, item: usize, cluster: usize) {
        debug_assert_eq!(self.labels[item], UNASSIGNED);
        self.labels[item] = cluster;
        self.sizes[cluster] += 1;
    }

    pub(crate) fn attach_new(&mut self, item: usize, value: Factor<T>) {
        self.stars.push(value);
        self.sizes.push(0);
        self.attach(item, self.stars.len() - 1);
    }

    fn check(&self) -> Result<()> {
        let mut counts = vec![0usize; self.stars.len()];
        for &l in &self.labels {
            if l >= self.stars.len() {
                return Err(Error::invalid(format!("dangling label {l}")));
            }
            counts[l] += 1;
        }
        if counts != self.sizes || counts.iter().any(|&c| c == 0) {
            return Err(Error::invalid("cluster sizes out of sync or empty cluster"));
        }
        Ok(())
    }
}

/// Starting partitions of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Initialization {
    /// Every row in one cluster, every column in one cluster.
    OneCluster,
    /// Every row and every column in its own cluster.
    #[default]
    Singletons,
}

/// Every augmented variable of one MCMC state.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentState<T> {
    z: Matrix<T>,
    w: Matrix<T>,
    rows: AxisState<T>,
    cols: AxisState<T>,
    sigma1_sq: T,
    sigma2_sq: T,
    iteration: u64,
}

impl<T: Real> LatentState<T> {
    pub fn new(
        z: Matrix<T>,
        w: Matrix<T>,
        rows: AxisState<T>,
        cols: AxisState<T>,
        sigma1_sq: T,
        sigma2_sq: T,
    ) -> Result<Self> {
        let (n, p) = (rows.len(), cols.len());
        if n == 0 || p == 0 {
            return Err(Error::invalid("state needs at least one row and one column"));
        }
        if (z.rows(), z.cols()) != (n, p) || (w.rows(), w.cols()) != (n, p) {
            return Err(Error::invalid("latent matrices do not match the label lengths"));
        }
        let d = rows.stars()[0].d();
        if rows.stars().iter().chain(cols.stars()).any(|f| f.d() != d) {
            return Err(Error::invalid("factors disagree on the latent dimension"));
        }
        if !(sigma1_sq > T::zero() && sigma2_sq > T::zero()) {
            return Err(Error::invalid("residual variances must be positive"));
        }
        Ok(Self { z, w, rows, cols, sigma1_sq, sigma2_sq, iteration: 0 })
    }

    /// Admissible starting point with every row in one cluster and every
    /// column in one cluster; see [`initialize_with`](Self::initialize_with).
    pub fn initialize<R: Rng + ?Sized>(
        data: &OrdinalDataset,
        cutoffs: &Cutoffs<T>,
        config: &ModelConfig<T>,
        rng: &mut R,
    ) -> Result<Self> {
        Self::initialize_with(data, cutoffs, config, Initialization::OneCluster, rng)
    }

    /// Admissible starting point: cluster values drawn from the base
    /// measures, `z` at the midpoint of the observed cell (0 when censored)
    /// and `w = ±1` according to the observation indicator.
    pub fn initialize_with<R: Rng + ?Sized>(
        data: &OrdinalDataset,
        cutoffs: &Cutoffs<T>,
        config: &ModelConfig<T>,
        init: Initialization,
        rng: &mut R,
    ) -> Result<Self> {
        if cutoffs.c() != data.c() {
            return Err(Error::invalid(format!(
                "cutoffs describe {} categories but the data has {}",
                cutoffs.c(),
                data.c()
            )));
        }
        let (n, p) = (data.n(), data.p());
        let mut z = Matrix::zeros(n, p);
        let mut w = Matrix::zeros(n, p);
        for i in 0..n {
            for j in 0..p {
                if data.observed(i, j) {
                    z[(i, j)] = cutoffs.cell_midpoint(data.y(i, j));
                    w[(i, j)] = T::one();
                } else {
                    w[(i, j)] = -T::one();
                }
            }
        }
        let mut axis = |len: usize, base: &BaseMeasure<T>| -> Result<AxisState<T>> {
            let labels: Vec<usize> = match init {
                Initialization::OneCluster => vec![0; len],
                Initialization::Singletons => (0..len).collect(),
            };
            let k = labels.iter().max().map_or(0, |&m| m + 1);
            let stars = (0..k).map(|_| Factor::draw_prior(base, rng)).collect::<Result<Vec<_>>>()?;
            AxisState::new(labels, stars)
        };
        let rows = axis(n, config.base(Axis::Rows))?;
        let cols = axis(p, config.base(Axis::Cols))?;
        let (s1, s2) = config.sigma().initial();
        Self::new(z, w, rows, cols, s1, s2)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn p(&self) -> usize {
        self.cols.len()
    }

    pub fn d(&self) -> usize {
        self.rows.stars()[0].d()
    }

    pub fn z(&self) -> &Matrix<T> {
        &self.z
    }

    pub fn w(&self) -> &Matrix<T> {
        &self.w
    }

    /// Raw access to the latents; callers are responsible for keeping them
    /// consistent with the data.
    pub fn latents_mut(&mut self) -> (&mut Matrix<T>, &mut Matrix<T>) {
        (&mut self.z, &mut self.w)
    }

    /// Latent matrix for factor column `r` (0 → `z`, 1 → `w`).
    #[inline]
    pub fn latent(&self, r: usize) -> &Matrix<T> {
        if r == 0 {
            &self.z
        } else {
            &self.w
        }
    }

    pub fn axis(&self, axis: Axis) -> &AxisState<T> {
        match axis {
            Axis::Rows => &self.rows,
            Axis::Cols => &self.cols,
        }
    }

    pub fn axis_mut(&mut self, axis: Axis) -> &mut AxisState<T> {
        match axis {
            Axis::Rows => &mut self.rows,
            Axis::Cols => &mut self.cols,
        }
    }

    pub fn row_labels(&self) -> &[usize] {
        self.rows.labels()
    }

    pub fn col_labels(&self) -> &[usize] {
        self.cols.labels()
    }

    pub fn theta1_star(&self) -> &[Factor<T>] {
        self.rows.stars()
    }

    pub fn theta2_star(&self) -> &[Factor<T>] {
        self.cols.stars()
    }

    pub fn k_n(&self) -> usize {
        self.rows.k()
    }

    pub fn k_p(&self) -> usize {
        self.cols.k()
    }

    pub fn sigma1_sq(&self) -> T {
        self.sigma1_sq
    }

    pub fn sigma2_sq(&self) -> T {
        self.sigma2_sq
    }

    /// Residual variance of latent column `r`.
    #[inline]
    pub fn sigma_sq(&self, r: usize) -> T {
        if r == 0 {
            self.sigma1_sq
        } else {
            self.sigma2_sq
        }
    }

    pub fn set_sigmas(&mut self, sigma1_sq: T, sigma2_sq: T) {
        self.sigma1_sq = sigma1_sq;
        self.sigma2_sq = sigma2_sq;
    }

    /// Number of completed sweeps.
    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub(crate) fn bump_iteration(&mut self) {
        self.iteration += 1;
    }

    /// `θ₁ᵢ^{(r)ᵀ} θ₂ⱼ^{(r)}`
    #[inline]
    pub fn factor_mean(&self, r: usize, i: usize, j: usize) -> T {
        dot(self.rows.factor_of(i).col(r), self.cols.factor_of(j).col(r))
    }

    /// All `n x p` factorized means for latent column `r`.
    pub fn factor_means(&self, r: usize) -> Matrix<T> {
        // distinct-value products, then broadcast
        let kp = self.cols.k();
        let mut block = vec![T::zero(); self.rows.k() * kp];
        for (a, f1) in self.rows.stars().iter().enumerate() {
            for (b, f2) in self.cols.stars().iter().enumerate() {
                block[a * kp + b] = dot(f1.col(r), f2.col(r));
            }
        }
        let (n, p) = (self.n(), self.p());
        let mut m = Matrix::zeros(n, p);
        for i in 0..n {
            let a = self.rows.labels()[i];
            let row = m.row_mut(i);
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = block[a * kp + self.cols.labels()[j]];
            }
        }
        m
    }

    /// Checks label bookkeeping and that the latents agree with the data.
    pub fn check_consistency(&self, data: &OrdinalDataset, cutoffs: &Cutoffs<T>) -> Result<()> {
        self.rows.check()?;
        self.cols.check()?;
        if (self.n(), self.p()) != (data.n(), data.p()) {
            return Err(Error::invalid("state and data dimensions differ"));
        }
        for i in 0..self.n() {
            for j in 0..self.p() {
                let (z, w) = (self.z[(i, j)], self.w[(i, j)]);
                if data.observed(i, j) {
                    let (lo, hi) = cutoffs.cell(data.y(i, j));
                    if !(lo < z && z <= hi) || !(w >= T::zero()) {
                        return Err(Error::invalid(format!(
                            "latent ({z}, {w}) at ({i}, {j}) violates the observed cell"
                        )));
                    }
                } else if !(w < T::zero()) || !z.is_finite() {
                    return Err(Error::invalid(format!("censored entry ({i}, {j}) has w = {w}")));
                }
            }
        }
        Ok(())
    }
}

//! Joint-distribution check of the full sampler: draws of (parameters, data)
//! from the prior must match draws obtained by alternating fresh data
//! generation with Gibbs sweeps.

use co3_core::gibbs::gibbs_sweep;
use co3_core::linalg::Matrix;
use co3_core::model::{make_default_cutoffs, AxisState, Cutoffs, Factor, LatentState, ModelConfig, OrdinalDataset, SigmaMode};
use co3_core::prior::crp_partition;
use co3_core::random::{inverse_gamma, std_normal};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{log_line, Check};

const N: usize = 4;
const P: usize = 4;
const SHAPE: f64 = 6.0;
const RATE: f64 = 5.0;

fn config() -> ModelConfig<f64> {
    ModelConfig::simulation_defaults(1)
        .unwrap()
        .with_sigma(SigmaMode::Hyperprior { shape1: SHAPE, rate1: RATE, shape2: SHAPE, rate2: RATE })
        .unwrap()
}

/// Fresh `(z, w)` and the data they imply, given factors and variances.
fn regenerate(state: &LatentState<f64>, cut: &Cutoffs<f64>, rng: &mut ChaCha8Rng) -> (LatentState<f64>, OrdinalDataset) {
    let mut z = Matrix::zeros(N, P);
    let mut w = Matrix::zeros(N, P);
    let mut y = Vec::with_capacity(N * P);
    let mut delta = Vec::with_capacity(N * P);
    let (s1, s2) = (state.sigma1_sq().sqrt(), state.sigma2_sq().sqrt());
    for i in 0..N {
        for j in 0..P {
            z[(i, j)] = state.factor_mean(0, i, j) + s1 * std_normal::<f64, _>(rng);
            w[(i, j)] = state.factor_mean(1, i, j) + s2 * std_normal::<f64, _>(rng);
            y.push(cut.category_of(z[(i, j)]));
            delta.push(w[(i, j)] >= 0.0);
        }
    }
    let rows = state.axis(co3_core::model::Axis::Rows).clone();
    let cols = state.axis(co3_core::model::Axis::Cols).clone();
    let next = LatentState::new(z, w, rows, cols, state.sigma1_sq(), state.sigma2_sq()).unwrap();
    (next, OrdinalDataset::new(N, P, 2, y, delta).unwrap())
}

fn prior_draw(cfg: &ModelConfig<f64>, cut: &Cutoffs<f64>, rng: &mut ChaCha8Rng) -> (LatentState<f64>, OrdinalDataset) {
    let axis = |len: usize, alpha: f64, base, rng: &mut ChaCha8Rng| {
        let labels = crp_partition(len, alpha, rng);
        let k = labels.iter().max().unwrap() + 1;
        let stars = (0..k).map(|_| Factor::draw_prior(base, rng).unwrap()).collect();
        AxisState::new(labels, stars).unwrap()
    };
    let rows = axis(N, cfg.alpha1(), cfg.base(co3_core::model::Axis::Rows), rng);
    let cols = axis(P, cfg.alpha2(), cfg.base(co3_core::model::Axis::Cols), rng);
    let s1 = inverse_gamma(rng, SHAPE, RATE).unwrap();
    let s2 = inverse_gamma(rng, SHAPE, RATE).unwrap();
    let skeleton = LatentState::new(Matrix::zeros(N, P), Matrix::filled(N, P, -1.0), rows, cols, s1, s2).unwrap();
    regenerate(&skeleton, cut, rng)
}

fn summary(st: &LatentState<f64>) -> [f64; 4] {
    let mz = st.z().as_slice().iter().sum::<f64>() / (N * P) as f64;
    [st.sigma1_sq(), st.k_n() as f64, st.k_p() as f64, mz]
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0))
}

/// Mean and squared standard error from non-overlapping batch means.
fn batch_mean_se2(xs: &[f64], batches: usize) -> (f64, f64) {
    let size = xs.len() / batches;
    let means: Vec<f64> = xs.chunks_exact(size).map(|c| c.iter().sum::<f64>() / size as f64).collect();
    let (m, v) = mean_var(&means);
    (m, v / means.len() as f64)
}

/// 10⁵ draws from each simulator, compared on the first two moments of
/// σ₁², k_n, k_p and the mean of z.
pub fn check() -> Check {
    let draws = 100_000;
    let cfg = config();
    let cut = make_default_cutoffs(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);

    let mut mc: Vec<[f64; 4]> = Vec::with_capacity(draws);
    for _ in 0..draws {
        mc.push(summary(&prior_draw(&cfg, &cut, &mut rng).0));
    }

    let (mut state, mut data) = prior_draw(&cfg, &cut, &mut rng);
    let mut sc: Vec<[f64; 4]> = Vec::with_capacity(draws);
    for _ in 0..draws {
        gibbs_sweep(&mut state, &data, &cut, &cfg, &mut rng).unwrap();
        sc.push(summary(&state));
        (state, data) = regenerate(&state, &cut, &mut rng);
    }

    let names = ["sigma1_sq", "k_n", "k_p", "mean_z"];
    let mut worst: f64 = 0.0;
    for (s, name) in names.iter().enumerate() {
        for power in [1, 2] {
            let a: Vec<f64> = mc.iter().map(|g| g[s].powi(power)).collect();
            let b: Vec<f64> = sc.iter().map(|g| g[s].powi(power)).collect();
            let (ma, va) = mean_var(&a);
            let (mb, se2b) = batch_mean_se2(&b, 100);
            let z = (ma - mb) / (va / a.len() as f64 + se2b).sqrt();
            log_line(format!("{name}^{power}: prior {ma:.5} gibbs {mb:.5} z = {z:.2}"));
            worst = worst.max(z.abs());
        }
    }
    Check::new(worst < 3.0, format!("largest standardized difference {worst:.2} over 4 statistics (limit 3)"))
}

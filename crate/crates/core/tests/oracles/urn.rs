//! Row-urn plus reshuffling targets the exact posterior over row partitions
//! when everything else is held fixed. The oracle integrates each block's
//! factor out through the dense joint Gaussian of the block's latents.

use std::collections::BTreeMap;

use co3_core::gibbs::{reshuffle_rows, urn_pass};
use co3_core::linalg::Matrix;
use co3_core::model::{Axis, AxisState, BaseMeasure, Factor, LatentState, ModelConfig, Partition, SigmaMode};
use co3_core::prior::log_eppf;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{log_line, Check};

const Z: [[f64; 2]; 3] = [[0.9, -0.4], [1.1, -0.2], [-0.6, 0.8]];
const W: [[f64; 2]; 3] = [[0.5, 1.3], [0.2, 0.9], [-0.7, 0.4]];
const PHI: [[f64; 2]; 2] = [[1.0, 0.5], [-0.7, 1.2]];
const SIGMA: [f64; 2] = [0.5, 1.5];
const U: [f64; 2] = [0.8, 1.3];
const MEAN: [f64; 2] = [0.2, -0.1];
const ALPHA: f64 = 1.0;

fn log_mvn(x: &DVector<f64>, mean: &DVector<f64>, cov: DMatrix<f64>) -> f64 {
    let k = x.len() as f64;
    let chol = cov.cholesky().expect("covariance is positive definite");
    let log_det = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    let r = x - mean;
    let quad = r.dot(&chol.solve(&r));
    -0.5 * (k * (2.0 * std::f64::consts::PI).ln() + log_det + quad)
}

/// Log density of the block's latents with the block's scalar factor integrated out.
fn log_block(block: &[usize]) -> f64 {
    let mut total = 0.0;
    for r in 0..2 {
        let x_src = if r == 0 { &Z } else { &W };
        let mut x = Vec::new();
        let mut phi = Vec::new();
        for &i in block {
            for j in 0..2 {
                x.push(x_src[i][j]);
                phi.push(PHI[j][r]);
            }
        }
        let phi = DVector::from_vec(phi);
        let x = DVector::from_vec(x);
        let k = x.len();
        let cov = DMatrix::identity(k, k) * SIGMA[r] + &phi * phi.transpose() * U[r];
        total += log_mvn(&x, &(&phi * MEAN[r]), cov);
    }
    total
}

fn exact_posterior() -> BTreeMap<Partition, f64> {
    let parts = Partition::enumerate(3);
    let logs: Vec<f64> = parts
        .iter()
        .map(|p| {
            let blocks: Vec<Vec<usize>> = (0..p.k()).map(|l| (0..3).filter(|&i| p.labels()[i] == l).collect()).collect();
            log_eppf(ALPHA, &p.sizes()).unwrap() + blocks.iter().map(|b| log_block(b)).sum::<f64>()
        })
        .collect();
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = logs.iter().map(|l| (l - m).exp()).sum();
    parts.into_iter().zip(logs).map(|(p, l)| (p, (l - m).exp() / z)).collect()
}

/// 2·10⁵ sweeps of row urn plus reshuffle on the 3 x 2, d = 1 problem.
pub fn check() -> Check {
    let b1 = BaseMeasure::new([vec![MEAN[0]], vec![MEAN[1]]], [U[0], U[1]], Matrix::identity(1)).unwrap();
    let b2 = BaseMeasure::isotropic(1, 1.0).unwrap();
    let cfg = ModelConfig::new(ALPHA, 1.0, b1, b2, SigmaMode::Fixed { sigma1_sq: SIGMA[0], sigma2_sq: SIGMA[1] }).unwrap();

    let z = Matrix::from_row_major(3, 2, Z.concat()).unwrap();
    let w = Matrix::from_row_major(3, 2, W.concat()).unwrap();
    let cols = AxisState::new(
        vec![0, 1],
        PHI.iter().map(|f| Factor::new(vec![f[0]], vec![f[1]]).unwrap()).collect(),
    )
    .unwrap();
    let rows = AxisState::new(vec![0, 0, 0], vec![Factor::new(vec![0.0], vec![0.0]).unwrap()]).unwrap();
    let mut state = LatentState::new(z, w, rows, cols, SIGMA[0], SIGMA[1]).unwrap();

    let exact = exact_posterior();
    let sweeps = 200_000;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut counts: BTreeMap<Partition, usize> = BTreeMap::new();
    for _ in 0..sweeps {
        urn_pass(Axis::Rows, &mut state, &cfg, &mut rng).unwrap();
        reshuffle_rows(&mut state, &cfg, &mut rng).unwrap();
        *counts.entry(Partition::new(state.row_labels())).or_insert(0) += 1;
    }
    let mut tv = 0.0;
    for (p, &pr) in &exact {
        let emp = *counts.get(p).unwrap_or(&0) as f64 / sweeps as f64;
        log_line(format!("{:?}: exact {pr:.4} empirical {emp:.4}", p.labels()));
        tv += 0.5 * (pr - emp).abs();
    }
    // the posterior must not be degenerate for the check to mean anything
    let spread = exact.values().all(|&p| p > 0.02);
    Check::new(tv <= 0.02 && spread, format!("total variation {tv:.5} over {sweeps} sweeps (limit 0.02)"))
}

//! Brute-force oracles for the partition point estimate and BARI.

use co3_core::inference::{ari, bari, posterior_similarity, vi_lower_bound, vi_point_estimate, SimilarityMatrix};
use co3_core::model::Partition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Check;

/// Similarity matrix of draws scattered around a random base partition.
pub fn noisy_similarity(n: usize, rng: &mut ChaCha8Rng) -> SimilarityMatrix {
    let k = rng.random_range(1..=n.min(4));
    let base: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    let flip = rng.random_range(0.05..0.5);
    let draws: Vec<Partition> = (0..rng.random_range(5..40))
        .map(|_| {
            let labels: Vec<usize> =
                base.iter().map(|&l| if rng.random::<f64>() < flip { rng.random_range(0..k + 2) } else { l }).collect();
            Partition::new(&labels)
        })
        .collect();
    posterior_similarity(&draws).unwrap()
}

pub fn exhaustive_minimum(s: &SimilarityMatrix) -> (Partition, f64) {
    Partition::enumerate(s.len())
        .into_iter()
        .map(|p| {
            let v = vi_lower_bound(&p, s);
            (p, v)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.k().cmp(&b.0.k())))
        .unwrap()
}

/// Point estimate against exhaustive search on `cases` matrices with N in 3..=8.
pub fn vi_check(cases: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut misses = Vec::new();
    for case in 0..cases {
        let n = 3 + case % 6;
        let s = noisy_similarity(n, &mut rng);
        let est = vi_point_estimate(&s);
        let (_, best_v) = exhaustive_minimum(&s);
        if (vi_lower_bound(&est, &s) - best_v).abs() >= 1e-12 {
            misses.push(case);
        }
    }
    Check::new(misses.is_empty(), format!("VI estimate optimal on {} of {cases} matrices (misses {misses:?})", cases - misses.len()))
}

pub fn materialized(rows: &Partition, cols: &Partition) -> Partition {
    let p = cols.len();
    let labels: Vec<usize> = (0..rows.len() * p).map(|k| rows.labels()[k / p] * p + cols.labels()[k % p]).collect();
    Partition::new(&labels)
}

pub fn random_partition(n: usize, rng: &mut ChaCha8Rng) -> Partition {
    let k = rng.random_range(1..=n);
    Partition::new(&(0..n).map(|_| rng.random_range(0..k)).collect::<Vec<_>>())
}

/// Product formula against ARI of the materialized cell labels.
pub fn bari_check(cases: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let n = rng.random_range(1..=6);
        let p = rng.random_range(1..=6);
        let (ra, ca) = (random_partition(n, &mut rng), random_partition(p, &mut rng));
        let (rb, cb) = (random_partition(n, &mut rng), random_partition(p, &mut rng));
        let product = bari(&ra, &ca, &rb, &cb).unwrap();
        let direct = ari(&materialized(&ra, &ca), &materialized(&rb, &cb)).unwrap();
        worst = worst.max((product - direct).abs());
    }
    Check::new(worst <= 1e-12, format!("BARI vs materialized ARI on {cases} cases: max difference {worst:.1e} (limit 1e-12)"))
}

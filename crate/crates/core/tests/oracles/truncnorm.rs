//! Kolmogorov–Smirnov checks of the truncated-normal sampler against the
//! analytic truncated CDF.

use co3_core::gibbs::sample_truncnorm;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{log_line, Check};

pub const DRAWS: usize = 100_000;
/// Asymptotic 1% critical value of the KS statistic.
const KS_1PCT: f64 = 1.627_6;

pub const INF: f64 = f64::INFINITY;

/// `(mean, var, lo, hi)`
fn configurations() -> Vec<(f64, f64, f64, f64)> {
    let s2 = 2f64.sqrt();
    vec![
        (0.0, 1.0, -INF, INF),
        (0.0, 1.0, 0.0, INF),
        (2.0, 0.25, -1.0, 0.0),
        (0.0, 1.0, -1.0, 1.0),
        (1.0, 4.0, -INF, -2.0),
        (0.0, 1.0, 6.0, INF),
        (3.0, 2.0, 3.0 + 6.0 * s2, 3.0 + 7.0 * s2),
        (0.0, 1.0, 8.0, 8.05),
        (0.0, 1.0, -INF, -7.0),
        (-1.0, 0.01, 0.5, 0.6),
        (0.0, 1.0, 4.9, 5.1),
        (0.5, 1.5, -0.3, 0.2),
    ]
}

/// CDF of the standardized truncated normal, via survival functions in the
/// upper half so that far-tail intervals keep their precision.
fn truncated_cdf(x: f64, a: f64, b: f64) -> f64 {
    let n = Normal::standard();
    if a > 0.0 {
        (n.sf(a) - n.sf(x)) / (n.sf(a) - n.sf(b))
    } else {
        (n.cdf(x) - n.cdf(a)) / (n.cdf(b) - n.cdf(a))
    }
}

fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Kolmogorov-Smirnov test of 10⁵ draws in each of 12 configurations.
pub fn check() -> Check {
    let crit = KS_1PCT / (DRAWS as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let (mut worst, mut failures) = (0.0f64, 0);
    for (k, &(mean, var, lo, hi)) in configurations().iter().enumerate() {
        let draws: Vec<f64> = (0..DRAWS).map(|_| sample_truncnorm(mean, var, lo, hi, &mut rng).unwrap()).collect();
        if !draws.iter().all(|&x| x > lo && x <= hi) {
            return Check::new(false, format!("configuration {k} left its interval"));
        }
        let sd = var.sqrt();
        let (a, b) = ((lo - mean) / sd, (hi - mean) / sd);
        let d = ks_statistic(draws.iter().map(|x| (x - mean) / sd).collect(), |x| truncated_cdf(x, a, b));
        log_line(format!("config {k}: ({mean}, {var}, {lo}, {hi}) D = {d:.5} (critical {crit:.5})"));
        worst = worst.max(d);
        failures += usize::from(d >= crit);
    }
    Check::new(failures == 0, format!("{failures} of 12 configurations rejected at 1%; largest D = {worst:.5}, critical {crit:.5}"))
}

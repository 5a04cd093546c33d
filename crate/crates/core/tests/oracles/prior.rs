//! Closed-form prior on the number of co-clusters against its defining
//! identities and against Chinese-restaurant simulation.

use std::collections::{BTreeMap, BTreeSet};

use co3_core::prior::{expected_k, prior_k_pmf, simulate_crp_bivariate};

use super::Check;

pub fn total_variation(exact: &BTreeMap<usize, f64>, empirical: &BTreeMap<usize, f64>) -> f64 {
    let keys: BTreeSet<usize> = exact.keys().chain(empirical.keys()).copied().collect();
    0.5 * keys
        .iter()
        .map(|k| (exact.get(k).copied().unwrap_or(0.0) - empirical.get(k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

const ALPHAS: [f64; 3] = [0.1, 1.0, 10.0];

/// Normalization and mean of the pmf for n = p = 5 over the 3 x 3 alpha grid.
pub fn closed_form_check() -> Check {
    let (mut sum_err, mut mean_err) = (0.0f64, 0.0f64);
    for a1 in ALPHAS {
        for a2 in ALPHAS {
            let pmf = prior_k_pmf::<f64>(5, 5, a1, a2).unwrap();
            sum_err = sum_err.max((pmf.total() - 1.0).abs());
            mean_err = mean_err.max((pmf.mean() - expected_k(5, 5, a1, a2)).abs());
        }
    }
    // Pr(k_n = 1) = (n-1)! α / (α)_n, squared for the two independent axes
    let single = 24.0 * 0.1 / (0.1 * 1.1 * 2.1 * 3.1 * 4.1);
    let exact = single * single;
    let p1 = prior_k_pmf::<f64>(5, 5, 0.1, 0.1).unwrap().prob(1);
    let point_err = (p1 - exact).abs();
    Check::new(
        sum_err <= 1e-10 && mean_err <= 1e-8 && point_err <= 1e-6 && (p1 - 0.66820).abs() < 5e-6,
        format!(
            "max |sum - 1| = {sum_err:.1e}, max |mean - E[k]| = {mean_err:.1e}, Pr(k=1 | alpha=0.1) = {p1:.7} (closed form {exact:.7}, error {point_err:.1e})"
        ),
    )
}

/// Total variation between the closed form and `draws` simulated CRP pairs.
pub fn simulation_check(draws: usize) -> Check {
    let mut worst = 0.0f64;
    for (seed, (a1, a2)) in [(0.1, 0.1), (1.0, 1.0), (10.0, 10.0), (0.1, 10.0)].into_iter().enumerate() {
        let exact = prior_k_pmf::<f64>(5, 5, a1, a2).unwrap();
        let empirical = simulate_crp_bivariate(5, 5, a1, a2, draws, 40 + seed as u64).unwrap();
        worst = worst.max(total_variation(&exact.pmf, &empirical));
    }
    Check::new(worst <= 0.005, format!("CRP simulation TV {worst:.5} at {draws} draws (limit 0.005)"))
}

//! Dirichlet-process partition combinatorics: EPPF, unsigned Stirling
//! numbers of the first kind, and the prior law of the number of bivariate
//! clusters `k = k_n k_p`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::log_add_exp;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid(format!("concentration must be positive, got {alpha}")));
    }
    Ok(())
}

/// `log (α)_n = log Γ(α + n) - log Γ(α)`
pub fn log_rising_factorial<T: Real>(alpha: T, n: usize) -> T {
    let a = alpha.f64();
    T::of(ln_gamma(a + n as f64) - ln_gamma(a))
}

/// Log of the DP exchangeable partition probability function for a
/// partition with the given block sizes.
pub fn log_eppf<T: Real>(alpha: T, sizes: &[usize]) -> Result<T> {
    check_alpha(alpha.f64())?;
    if sizes.is_empty() {
        return Err(Error::invalid("EPPF needs at least one block"));
    }
    if sizes.contains(&0) {
        return Err(Error::invalid("EPPF block sizes must be positive"));
    }
    let n: usize = sizes.iter().sum();
    let a = alpha.f64();
    let k = sizes.len() as f64;
    let blocks: f64 = sizes.iter().map(|&s| ln_gamma(s as f64)).sum();
    Ok(T::of(k * a.ln() - log_rising_factorial(a, n) + blocks))
}

fn stirling_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Row `n` of `log |s(n, k)|` for `k = 0..=n`, memoized.
pub fn log_stirling1_row(n: usize) -> Arc<Vec<f64>> {
    let cache = stirling_cache();
    let start = {
        let guard = cache.lock().expect("stirling cache poisoned");
        if let Some(row) = guard.get(&n) {
            return Arc::clone(row);
        }
        guard.iter().filter(|(&m, _)| m < n).max_by_key(|(&m, _)| m).map(|(&m, r)| (m, Arc::clone(r)))
    };
    let (mut m, mut row) = match start {
        Some((m, r)) => (m, r.as_ref().clone()),
        None => (0, vec![0.0]),
    };
    // |s(m+1, k)| = m |s(m, k)| + |s(m, k-1)|
    while m < n {
        let ln_m = (m as f64).ln();
        let mut next = vec![f64::NEG_INFINITY; m + 2];
        for k in 1..=m + 1 {
            let stay = if k <= m && m > 0 { ln_m + row[k] } else { f64::NEG_INFINITY };
            next[k] = log_add_exp(stay, row[k - 1]);
        }
        row = next;
        m += 1;
    }
    let row = Arc::new(row);
    cache.lock().expect("stirling cache poisoned").insert(n, Arc::clone(&row));
    row
}

/// `log |s(n, k)|` for `1 <= k <= n`.
pub fn log_stirling1_unsigned<T: Real>(n: usize, k: usize) -> Result<T> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    Ok(T::of(log_stirling1_row(n)[k]))
}

/// Log-probability that a DP(α) partition of `n` items has `k` blocks.
fn log_k_pmf(n: usize, alpha: f64) -> Vec<f64> {
    let row = log_stirling1_row(n);
    let norm = log_rising_factorial(alpha, n);
    let la = alpha.ln();
    (0..=n).map(|k| if k == 0 { f64::NEG_INFINITY } else { k as f64 * la + row[k] - norm }).collect()
}

/// Prior law of the number of bivariate clusters `k = k_n k_p`.
#[derive(Debug, Clone)]
pub struct BivariateClusterPrior<T> {
    pub n: usize,
    pub p: usize,
    pub alpha1: T,
    pub alpha2: T,
    pub pmf: BTreeMap<usize, T>,
}

impl<T: Real> BivariateClusterPrior<T> {
    pub fn prob(&self, k: usize) -> T {
        self.pmf.get(&k).copied().unwrap_or_else(T::zero)
    }

    pub fn total(&self) -> T {
        self.pmf.values().copied().sum()
    }

    pub fn mean(&self) -> T {
        self.pmf.iter().map(|(&k, &p)| T::of_usize(k) * p).sum()
    }
}

pub fn prior_k_pmf<T: Real>(n: usize, p: usize, alpha1: T, alpha2: T) -> Result<BivariateClusterPrior<T>> {
    if n == 0 || p == 0 {
        return Err(Error::invalid("n and p must be at least 1"));
    }
    check_alpha(alpha1.f64())?;
    check_alpha(alpha2.f64())?;
    let rows = log_k_pmf(n, alpha1.f64());
    let cols = log_k_pmf(p, alpha2.f64());
    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
    for (i, &li) in rows.iter().enumerate().skip(1) {
        for (j, &lj) in cols.iter().enumerate().skip(1) {
            *acc.entry(i * j).or_insert(0.0) += (li + lj).exp();
        }
    }
    Ok(BivariateClusterPrior {
        n,
        p,
        alpha1,
        alpha2,
        pmf: acc.into_iter().map(|(k, v)| (k, T::of(v))).collect(),
    })
}

/// `E[k] = α₁ α₂ Σᵢ 1/(α₁+i-1) Σⱼ 1/(α₂+j-1)`
pub fn expected_k<T: Real>(n: usize, p: usize, alpha1: T, alpha2: T) -> T {
    let h = |m: usize, a: T| (0..m).map(|i| T::one() / (a + T::of_usize(i))).sum::<T>();
    alpha1 * alpha2 * h(n, alpha1) * h(p, alpha2)
}

/// Number of tables after seating `n` customers in a CRP(α).
pub fn crp_table_count<R: Rng + ?Sized>(n: usize, alpha: f64, rng: &mut R) -> usize {
    (0..n).filter(|&i| rng.random::<f64>() * (alpha + i as f64) < alpha).count()
}

/// Full CRP(α) seating of `n` customers, labels in order of first use.
pub fn crp_partition<R: Rng + ?Sized>(n: usize, alpha: f64, rng: &mut R) -> Vec<usize> {
    let mut sizes: Vec<usize> = Vec::new();
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let mut u = rng.random::<f64>() * (alpha + i as f64);
        let mut chosen = sizes.len();
        for (t, &s) in sizes.iter().enumerate() {
            if u < s as f64 {
                chosen = t;
                break;
            }
            u -= s as f64;
        }
        if chosen == sizes.len() {
            sizes.push(0);
        }
        sizes[chosen] += 1;
        labels.push(chosen);
    }
    labels
}

/// Empirical pmf of `k_n k_p` from independent CRP draws on each axis.
pub fn simulate_crp_bivariate(
    n: usize,
    p: usize,
    alpha1: f64,
    alpha2: f64,
    draws: usize,
    seed: u64,
) -> Result<BTreeMap<usize, f64>> {
    if draws == 0 {
        return Err(Error::invalid("need at least one draw"));
    }
    check_alpha(alpha1)?;
    check_alpha(alpha2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for _ in 0..draws {
        let k = crp_table_count(n, alpha1, &mut rng) * crp_table_count(p, alpha2, &mut rng);
        *counts.entry(k).or_insert(0) += 1;
    }
    Ok(counts.into_iter().map(|(k, c)| (k, c as f64 / draws as f64)).collect())
}

/// Total-variation distance between two pmfs on the integers.
pub fn total_variation<T: Real>(a: &BTreeMap<usize, T>, b: &BTreeMap<usize, f64>) -> f64 {
    let mut keys: Vec<usize> = a.keys().chain(b.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    0.5 * keys
        .iter()
        .map(|k| (a.get(k).map_or(0.0, |v| v.f64()) - b.get(k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

//! Synthetic data under the co-clustering model with mixture-generated
//! factors and informative or random censoring.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::model::{make_default_cutoffs, Cutoffs, Factor, OrdinalDataset, Partition};
use crate::random::std_normal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CensorMode {
    /// Only entries equal to the target category can be censored.
    Informative,
    Random,
}

/// Which side of the matrix a set of factors is generated for. Row and
/// column component means are placed differently so that the products of
/// matching components are positive and the others negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorRole {
    Row,
    Column,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub n: usize,
    pub p: usize,
    pub c: u32,
    pub d: usize,
    pub n_row_components: usize,
    pub n_col_components: usize,
    pub component_separation: f64,
    /// Variance of the isotropic jitter around each component mean.
    pub jitter_var: f64,
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
    pub censor_rate: f64,
    pub censor_mode: CensorMode,
    pub target_category: u32,
    pub seed: u64,
}

impl ScenarioConfig {
    /// 50 x 50 three-category data, 3 x 3 components, 5% informative censoring
    /// of the lowest category.
    pub fn ordinal(seed: u64) -> Self {
        Self {
            n: 50,
            p: 50,
            c: 3,
            d: 3,
            n_row_components: 3,
            n_col_components: 3,
            component_separation: 2.0,
            jitter_var: 0.1,
            sigma1_sq: 0.1,
            sigma2_sq: 1.5,
            censor_rate: 0.05,
            censor_mode: CensorMode::Informative,
            target_category: 1,
            seed,
        }
    }

    /// The binary counterpart of [`ordinal`](Self::ordinal).
    pub fn binary(seed: u64) -> Self {
        Self { c: 2, ..Self::ordinal(seed) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 || self.d == 0 || self.c < 2 {
            return Err(Error::invalid("need n, p, d >= 1 and c >= 2"));
        }
        if self.n_row_components == 0 || self.n_col_components == 0 {
            return Err(Error::invalid("component counts must be at least 1"));
        }
        if self.n_row_components > self.n || self.n_col_components > self.p {
            return Err(Error::invalid("more mixture components than items"));
        }
        if !(0.0..1.0).contains(&self.censor_rate) {
            return Err(Error::invalid(format!("censor rate {} is outside [0, 1)", self.censor_rate)));
        }
        if !(1..=self.c).contains(&self.target_category) {
            return Err(Error::invalid(format!("target category {} is outside 1..={}", self.target_category, self.c)));
        }
        let positive = [self.jitter_var, self.sigma1_sq, self.sigma2_sq];
        if !(self.component_separation >= 0.0) || positive.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::invalid("separation must be non-negative and variances positive"));
        }
        Ok(())
    }

    /// Entries the censoring step aims for: `⌈rate · n · p⌉`.
    pub fn censor_target(&self) -> usize {
        // guard against 0.05 * 2500 landing a hair above an integer
        ((self.censor_rate * (self.n * self.p) as f64) - 1e-9).ceil().max(0.0) as usize
    }
}

/// Mean of component `k`: a scaled coordinate axis (cycling through the `d`
/// axes with growing length once `k ≥ d`), shifted by `−s/2` per coordinate
/// for columns.
fn component_mean(role: FactorRole, k: usize, d: usize, separation: f64) -> Vec<f64> {
    let mut m = vec![0.0; d];
    m[k % d] = separation * (1 + k / d) as f64;
    if role == FactorRole::Column {
        m.iter_mut().for_each(|x| *x -= 0.5 * separation);
    }
    m
}

/// Mixture-distributed factors with balanced, shuffled labels.
pub fn generate_factors<R: Rng + ?Sized>(
    role: FactorRole,
    k_components: usize,
    count: usize,
    d: usize,
    separation: f64,
    jitter_var: f64,
    rng: &mut R,
) -> Result<(Vec<Factor<f64>>, Partition)> {
    if k_components == 0 || k_components > count || d == 0 {
        return Err(Error::invalid("need 1 <= components <= count and d >= 1"));
    }
    let mut labels: Vec<usize> = (0..count).map(|i| i % k_components).collect();
    labels.shuffle(rng);
    let sd = jitter_var.sqrt();
    let factors = labels
        .iter()
        .map(|&k| {
            let mean = component_mean(role, k, d, separation);
            let mut col = || mean.iter().map(|&m| m + sd * std_normal::<f64, _>(rng)).collect::<Vec<_>>();
            let c0 = col();
            let c1 = col();
            Factor::new(c0, c1)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((factors, Partition::new(&labels)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedData {
    pub dataset: OrdinalDataset,
    pub rows: Partition,
    pub cols: Partition,
    /// Ordinal latents and the categories they fall in before censoring, row-major.
    pub z: Vec<f64>,
    pub full_y: Vec<u32>,
    pub theta1: Vec<Factor<f64>>,
    pub theta2: Vec<Factor<f64>>,
    pub censored: usize,
    pub censor_target: usize,
}

pub fn generate_dataset(sc: &ScenarioConfig) -> Result<SimulatedData> {
    sc.validate()?;
    let cutoffs: Cutoffs<f64> = make_default_cutoffs(sc.c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    let s = sc.component_separation;
    let (theta1, rows) = generate_factors(FactorRole::Row, sc.n_row_components, sc.n, sc.d, s, sc.jitter_var, &mut rng)?;
    let (theta2, cols) = generate_factors(FactorRole::Column, sc.n_col_components, sc.p, sc.d, s, sc.jitter_var, &mut rng)?;
    let (sd1, sd2) = (sc.sigma1_sq.sqrt(), sc.sigma2_sq.sqrt());
    let mut z_all = Vec::with_capacity(sc.n * sc.p);
    let mut full_y = Vec::with_capacity(sc.n * sc.p);
    for t1 in &theta1 {
        for t2 in &theta2 {
            let z = dot(t1.col(0), t2.col(0)) + sd1 * std_normal::<f64, _>(&mut rng);
            // the censoring latent is drawn to keep the stream aligned with
            // the model but is not used: censoring is imposed below
            let _w = dot(t1.col(1), t2.col(1)) + sd2 * std_normal::<f64, _>(&mut rng);
            full_y.push(cutoffs.category_of(z));
            z_all.push(z);
        }
    }

    let np = sc.n * sc.p;
    let target = sc.censor_target();
    let eligible: Vec<usize> = match sc.censor_mode {
        CensorMode::Informative => (0..np).filter(|&k| full_y[k] == sc.target_category).collect(),
        CensorMode::Random => (0..np).collect(),
    };
    if eligible.len() < target {
        log::warn!(
            "only {} entries are eligible for censoring, {} requested",
            eligible.len(),
            target
        );
    }
    let mut delta = vec![true; np];
    let take = target.min(eligible.len());
    for k in sample(&mut rng, eligible.len(), take) {
        delta[eligible[k]] = false;
    }
    let dataset = OrdinalDataset::new(sc.n, sc.p, sc.c, full_y.clone(), delta)?;
    Ok(SimulatedData { dataset, rows, cols, z: z_all, full_y, theta1, theta2, censored: take, censor_target: target })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_component_and_zero_separation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (_, labels) = generate_factors(FactorRole::Row, 1, 10, 2, 3.0, 0.1, &mut rng).unwrap();
        assert_eq!(labels.k(), 1);
        for k in 0..4 {
            assert_eq!(component_mean(FactorRole::Row, k, 3, 0.0), vec![0.0; 3]);
            assert_eq!(component_mean(FactorRole::Column, k, 3, 0.0), vec![0.0; 3]);
        }
        assert!(generate_factors(FactorRole::Row, 4, 3, 2, 1.0, 0.1, &mut rng).is_err());
    }

    #[test]
    fn components_are_well_separated() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for role in [FactorRole::Row, FactorRole::Column] {
            let (f, labels) = generate_factors(role, 3, 300, 3, 3.0, 0.1, &mut rng).unwrap();
            let dist = |a: &Factor<f64>, b: &Factor<f64>| {
                (0..2)
                    .flat_map(|r| a.col(r).iter().zip(b.col(r)).map(|(x, y)| (x - y) * (x - y)).collect::<Vec<_>>())
                    .sum::<f64>()
                    .sqrt()
            };
            let (mut within, mut nw, mut between, mut nb) = (0.0, 0usize, 0.0, 0usize);
            for a in 0..300 {
                for b in 0..a {
                    let dd = dist(&f[a], &f[b]);
                    if labels.same(a, b) {
                        within += dd;
                        nw += 1;
                    } else {
                        between += dd;
                        nb += 1;
                    }
                }
            }
            assert!((within / nw as f64) / (between / nb as f64) < 0.25);
            assert_eq!(labels.sizes(), vec![100, 100, 100]);
        }
    }

    #[test]
    fn matching_components_give_positive_products() {
        for k in 0..3 {
            for l in 0..3 {
                let g = dot(&component_mean(FactorRole::Row, k, 3, 2.0), &component_mean(FactorRole::Column, l, 3, 2.0));
                assert_eq!(g, if k == l { 2.0 } else { -2.0 });
            }
        }
    }

    #[test]
    fn censoring_modes() {
        let sc = ScenarioConfig { censor_rate: 0.0, ..ScenarioConfig::ordinal(3) };
        assert_eq!(generate_dataset(&sc).unwrap().dataset.censored_count(), 0);
        let sc = ScenarioConfig { censor_mode: CensorMode::Random, ..ScenarioConfig::ordinal(3) };
        let sim = generate_dataset(&sc).unwrap();
        assert_eq!(sim.dataset.censored_count(), 125);
        let sim = generate_dataset(&ScenarioConfig::ordinal(4)).unwrap();
        assert_eq!(sim.censored, 125);
        for k in 0..2500 {
            if !sim.dataset.delta_raw()[k] {
                assert_eq!(sim.full_y[k], 1);
            }
        }
        let sc = ScenarioConfig { censor_rate: 0.15, ..ScenarioConfig::binary(5) };
        assert_eq!(sc.censor_target(), 375);
    }

    #[test]
    fn deterministic_and_consistent_with_cutoffs() {
        let a = generate_dataset(&ScenarioConfig::binary(9)).unwrap();
        let b = generate_dataset(&ScenarioConfig::binary(9)).unwrap();
        assert_eq!(a, b);
        let cut: Cutoffs<f64> = make_default_cutoffs(2).unwrap();
        for (&z, &y) in a.z.iter().zip(&a.full_y) {
            let (lo, hi) = cut.cell(y);
            assert!(lo < z && z <= hi);
        }
    }

    #[test]
    fn exhausted_eligibility_is_reported() {
        let sc = ScenarioConfig { censor_rate: 0.9, ..ScenarioConfig::ordinal(6) };
        let sim = generate_dataset(&sc).unwrap();
        assert!(sim.censored < sim.censor_target);
        assert_eq!(sim.dataset.censored_count(), sim.censored);
    }
}

//! Choice of the latent dimension by LPML over a grid of `d`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gibbs::{run_chain, GibbsControls};
use crate::model::{BaseMeasure, Cutoffs, ModelConfig, OrdinalDataset, SigmaMode};
use crate::random::derive_seed;
use crate::scalar::Real;

/// The `d`-independent part of a [`ModelConfig`]. Per `d`, base measures get
/// zero means, identity `V` and `u = 1/√d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigTemplate<T> {
    pub alpha1: T,
    pub alpha2: T,
    pub sigma: SigmaMode<T>,
}

impl<T: Real> Default for ConfigTemplate<T> {
    fn default() -> Self {
        Self {
            alpha1: T::one(),
            alpha2: T::one(),
            sigma: SigmaMode::Fixed { sigma1_sq: T::of(0.1), sigma2_sq: T::of(1.5) },
        }
    }
}

impl<T: Real> ConfigTemplate<T> {
    pub fn for_d(&self, d: usize) -> Result<ModelConfig<T>> {
        if d == 0 {
            return Err(Error::invalid("latent dimension must be at least 1"));
        }
        let u = T::one() / T::of_usize(d).sqrt();
        ModelConfig::new(
            self.alpha1,
            self.alpha2,
            BaseMeasure::isotropic(d, u)?,
            BaseMeasure::isotropic(d, u)?,
            self.sigma,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpmlReport {
    pub per_d: BTreeMap<usize, f64>,
    pub best_d: usize,
    /// Grid values whose chain failed, with the reason.
    pub failed: BTreeMap<usize, String>,
}

/// Runs one chain per `d` (in parallel, seeds derived from `controls.seed`
/// and `d`) and reports the LPML of each.
pub fn select_d<T: Real>(
    data: &OrdinalDataset,
    cutoffs: &Cutoffs<T>,
    template: &ConfigTemplate<T>,
    d_grid: &[usize],
    controls: &GibbsControls,
) -> Result<LpmlReport> {
    if d_grid.is_empty() {
        return Err(Error::invalid("empty grid of latent dimensions"));
    }
    controls.validate()?;
    let mut grid = d_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let results: Vec<(usize, Result<f64>)> = grid
        .par_iter()
        .map(|&d| {
            let run = || -> Result<f64> {
                let config = template.for_d(d)?;
                let c = GibbsControls { seed: derive_seed(controls.seed, &[d as u64]), ..*controls };
                let out = run_chain(data, cutoffs, &config, &c)?;
                if let Some(e) = out.failure {
                    return Err(e);
                }
                out.lpml()
            };
            (d, run())
        })
        .collect();

    let mut per_d = BTreeMap::new();
    let mut failed = BTreeMap::new();
    let mut first_err = None;
    for (d, r) in results {
        match r {
            Ok(v) => {
                per_d.insert(d, v);
            }
            Err(e) => {
                log::warn!("d = {d} failed: {e}");
                failed.insert(d, e.to_string());
                first_err.get_or_insert(e);
            }
        }
    }
    let best_d = per_d
        .iter()
        .fold(None::<(usize, f64)>, |best, (&d, &v)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((d, v)),
        })
        .map(|(d, _)| d);
    match best_d {
        Some(best_d) => Ok(LpmlReport { per_d, best_d, failed }),
        None => Err(first_err.expect("a non-empty grid with no results has failures")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_default_cutoffs;

    #[test]
    fn single_d_grid_and_structure() {
        let data = OrdinalDataset::new(4, 4, 2, (0..16).map(|k| (k % 2) as u32 + 1).collect(), vec![true; 16]).unwrap();
        let cut = make_default_cutoffs(2).unwrap();
        let c = GibbsControls::new(20, 10, 1, 5).unwrap();
        let t = ConfigTemplate::<f64>::default();
        let r = select_d(&data, &cut, &t, &[2], &c).unwrap();
        assert_eq!(r.best_d, 2);
        let r = select_d(&data, &cut, &t, &[3, 1, 2], &c).unwrap();
        assert_eq!(r.per_d.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
        let max = r.per_d.values().copied().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(r.per_d[&r.best_d], max);
        assert!(select_d(&data, &cut, &t, &[], &c).is_err());
        let r = select_d(&data, &cut, &t, &[0, 2], &c).unwrap();
        assert!(r.failed.contains_key(&0));
    }
}

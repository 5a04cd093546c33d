//! Conditional predictive ordinates and the log pseudo-marginal likelihood.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::log_add_exp;

/// Streaming harmonic-mean CPO: per entry, `log Σ_t 1 / L_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpoAccumulator {
    log_inv_sums: Vec<f64>,
    draws: u64,
}

impl CpoAccumulator {
    pub fn new(entries: usize) -> Self {
        Self { log_inv_sums: vec![f64::NEG_INFINITY; entries], draws: 0 }
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn push<T: Real>(&mut self, likelihoods: &[T]) -> Result<()> {
        if likelihoods.len() != self.log_inv_sums.len() {
            return Err(Error::invalid(format!(
                "expected {} likelihood values, got {}",
                self.log_inv_sums.len(),
                likelihoods.len()
            )));
        }
        if let Some(bad) = likelihoods.iter().position(|&l| !(l > T::zero()) || !l.is_finite()) {
            return Err(Error::invalid(format!("likelihood {} at entry {bad} is not positive", likelihoods[bad])));
        }
        let floor = crate::PROB_FLOOR;
        for (acc, &l) in self.log_inv_sums.iter_mut().zip(likelihoods) {
            *acc = log_add_exp(*acc, -l.f64().max(floor).ln());
        }
        self.draws += 1;
        Ok(())
    }

    /// `log CPO` per entry.
    pub fn log_cpo(&self) -> Result<Vec<f64>> {
        if self.draws == 0 {
            return Err(Error::invalid("no draws accumulated"));
        }
        let log_t = (self.draws as f64).ln();
        Ok(self.log_inv_sums.iter().map(|&s| log_t - s).collect())
    }

    pub fn lpml(&self) -> Result<f64> {
        Ok(self.log_cpo()?.iter().sum())
    }
}

/// LPML from stored per-entry likelihood draws (one slice per draw).
pub fn lpml<T: Real, D: AsRef<[T]>>(draws: &[D]) -> Result<f64> {
    let first = draws.first().ok_or_else(|| Error::invalid("no likelihood draws"))?;
    let mut acc = CpoAccumulator::new(first.as_ref().len());
    for d in draws {
        acc.push(d.as_ref())?;
    }
    acc.lpml()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_and_repeated_draws() {
        let l = vec![0.2, 0.5, 0.9];
        let expect: f64 = l.iter().map(|x: &f64| x.ln()).sum();
        assert!((lpml(&[l.clone()]).unwrap() - expect).abs() < 1e-12);
        assert!((lpml(&[l.clone(), l.clone(), l]).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn harmonic_mean_of_two() {
        let l = 0.3;
        let v = lpml(&[vec![l], vec![l / 2.0]]).unwrap();
        assert!((v - (2.0 * l / 3.0f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(lpml(&[vec![0.5, 0.0]]).is_err());
        assert!(lpml::<f64, Vec<f64>>(&[]).is_err());
        assert!(lpml(&[vec![0.5], vec![0.5, 0.5]]).is_err());
        assert!(CpoAccumulator::new(2).lpml().is_err());
    }

    #[test]
    fn order_invariant() {
        let a = vec![0.1f64, 0.7];
        let b = vec![0.4f64, 0.05];
        let c = vec![0.9f64, 0.3];
        let x = lpml(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let y = lpml(&[c, a, b]).unwrap();
        assert!((x - y).abs() < 1e-12);
    }
}

use crate::error::{Error, Result};
use crate::model::Partition;

/// Posterior co-clustering probabilities of `N` items.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    s: Vec<f64>,
}

impl SimilarityMatrix {
    /// Validates a row-major `n x n` matrix: symmetric, unit diagonal, entries in `[0, 1]`.
    pub fn from_row_major(n: usize, s: Vec<f64>) -> Result<Self> {
        if s.len() != n * n {
            return Err(Error::invalid(format!("expected {} entries, got {}", n * n, s.len())));
        }
        for a in 0..n {
            if s[a * n + a] != 1.0 {
                return Err(Error::invalid(format!("diagonal entry {a} is not 1")));
            }
            for b in 0..a {
                let v = s[a * n + b];
                if !(0.0..=1.0).contains(&v) || v != s[b * n + a] {
                    return Err(Error::invalid(format!("entry ({a}, {b}) is asymmetric or outside [0, 1]")));
                }
            }
        }
        Ok(Self { n, s })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.s[a * self.n + b]
    }

    pub fn row(&self, a: usize) -> &[f64] {
        &self.s[a * self.n..(a + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.s
    }
}

/// Fraction of draws in which each pair of items shares a cluster.
pub fn posterior_similarity(draws: &[Partition]) -> Result<SimilarityMatrix> {
    let first = draws.first().ok_or_else(|| Error::invalid("no draws to summarize"))?;
    let n = first.len();
    if draws.iter().any(|d| d.len() != n) {
        return Err(Error::invalid("draws have different lengths"));
    }
    let mut counts = vec![0u64; n * n];
    for d in draws {
        let labels = d.labels();
        for a in 0..n {
            for b in 0..a {
                if labels[a] == labels[b] {
                    counts[a * n + b] += 1;
                }
            }
        }
    }
    let total = draws.len() as f64;
    let mut s = vec![0.0; n * n];
    for a in 0..n {
        s[a * n + a] = 1.0;
        for b in 0..a {
            let v = counts[a * n + b] as f64 / total;
            s[a * n + b] = v;
            s[b * n + a] = v;
        }
    }
    Ok(SimilarityMatrix { n, s })
}

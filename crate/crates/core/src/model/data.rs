use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Category code stored at censored positions. Never read by the model.
pub const CENSORED_SENTINEL: u32 = 0;

/// An `n x p` matrix of ordinal codes in `1..=c` together with the
/// observation indicators. Row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinalDataset {
    n: usize,
    p: usize,
    c: u32,
    y: Vec<u32>,
    delta: Vec<bool>,
}

impl OrdinalDataset {
    /// Builds a dataset, checking dimensions and that every observed code is
    /// in range. Codes at censored positions are replaced by the sentinel.
    pub fn new(n: usize, p: usize, c: u32, mut y: Vec<u32>, delta: Vec<bool>) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::invalid(format!("dataset must be non-empty, got {n}x{p}")));
        }
        if c < 2 {
            return Err(Error::invalid(format!("need at least 2 categories, got {c}")));
        }
        if y.len() != n * p || delta.len() != n * p {
            return Err(Error::invalid(format!(
                "expected {} entries, got y={} delta={}",
                n * p,
                y.len(),
                delta.len()
            )));
        }
        for (idx, (yv, &obs)) in y.iter_mut().zip(&delta).enumerate() {
            if obs {
                if *yv < 1 || *yv > c {
                    return Err(Error::invalid(format!(
                        "observed code {} at ({}, {}) outside 1..={c}",
                        yv,
                        idx / p,
                        idx % p
                    )));
                }
            } else {
                *yv = CENSORED_SENTINEL;
            }
        }
        Ok(Self { n, p, c, y, delta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    /// Category code; meaningless when the entry is censored.
    #[inline]
    pub fn y(&self, i: usize, j: usize) -> u32 {
        self.y[i * self.p + j]
    }

    #[inline]
    pub fn observed(&self, i: usize, j: usize) -> bool {
        self.delta[i * self.p + j]
    }

    pub fn y_raw(&self) -> &[u32] {
        &self.y
    }

    pub fn delta_raw(&self) -> &[bool] {
        &self.delta
    }

    pub fn censored_count(&self) -> usize {
        self.delta.iter().filter(|&&d| !d).count()
    }

    /// Returns a copy with rows reordered so that new row `r` is old row `perm[r]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::invalid("row permutation has the wrong length"));
        }
        let mut y = Vec::with_capacity(self.y.len());
        let mut delta = Vec::with_capacity(self.delta.len());
        for &src in perm {
            y.extend_from_slice(&self.y[src * self.p..(src + 1) * self.p]);
            delta.extend_from_slice(&self.delta[src * self.p..(src + 1) * self.p]);
        }
        Self::new(self.n, self.p, self.c, y, delta)
    }
}

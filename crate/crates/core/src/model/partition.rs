use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// Relabels so that cluster ids appear in first-use order starting at 0.
pub fn canonicalize(labels: &[usize]) -> Vec<usize> {
    let mut map: HashMap<usize, usize> = HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// A set partition of `N` items in canonical labelling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    pub fn new(labels: &[usize]) -> Self {
        Self { labels: canonicalize(labels) }
    }

    pub fn singletons(n: usize) -> Self {
        Self { labels: (0..n).collect() }
    }

    pub fn one_cluster(n: usize) -> Self {
        Self { labels: vec![0; n] }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of clusters.
    pub fn k(&self) -> usize {
        self.labels.iter().max().map_or(0, |&m| m + 1)
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k()];
        for &l in &self.labels {
            s[l] += 1;
        }
        s
    }

    #[inline]
    pub fn same(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }
    /// Every set partition of `n` items (Bell number many), in
    /// restricted-growth order. Intended for small `n` only.
    pub fn enumerate(n: usize) -> Vec<Partition> {
        fn grow(cur: &mut Vec<usize>, n: usize, k: usize, out: &mut Vec<Partition>) {
            if cur.len() == n {
                out.push(Partition { labels: cur.clone() });
                return;
            }
            for l in 0..=k {
                cur.push(l);
                grow(cur, n, k.max(l + 1), out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        grow(&mut vec![0], n, 1, &mut out);
        out
    }
}

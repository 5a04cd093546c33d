//! Adjusted Rand index for partitions and for the cell partitions induced
//! by a pair of row and column partitions.

use crate::error::{Error, Result};
use crate::model::Partition;

#[inline]
fn pairs(m: u128) -> u128 {
    m * m.saturating_sub(1) / 2
}

fn contingency(a: &Partition, b: &Partition) -> Vec<Vec<u128>> {
    let mut t = vec![vec![0u128; b.k()]; a.k()];
    for (&x, &y) in a.labels().iter().zip(b.labels()) {
        t[x][y] += 1;
    }
    t
}

fn sum_sq(values: impl IntoIterator<Item = u128>) -> u128 {
    values.into_iter().map(|v| v * v).sum()
}

/// ARI from pair counts: co-clustered pairs in both, in `a`, in `b`, and all pairs.
fn adjusted(index: u128, sum_a: u128, sum_b: u128, total: u128) -> f64 {
    let (index, sum_a, sum_b, total) = (index as f64, sum_a as f64, sum_b as f64, total as f64);
    let expected = if total > 0.0 { sum_a * sum_b / total } else { 0.0 };
    let max = 0.5 * (sum_a + sum_b);
    if max == expected {
        // both partitions trivial in the same way
        return if index == max { 1.0 } else { 0.0 };
    }
    (index - expected) / (max - expected)
}

pub fn ari(a: &Partition, b: &Partition) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!("partitions have lengths {} and {}", a.len(), b.len())));
    }
    let t = contingency(a, b);
    let index: u128 = t.iter().flatten().map(|&x| pairs(x)).sum();
    let sa: u128 = a.sizes().into_iter().map(|s| pairs(s as u128)).sum();
    let sb: u128 = b.sizes().into_iter().map(|s| pairs(s as u128)).sum();
    Ok(adjusted(index, sa, sb, pairs(a.len() as u128)))
}

/// ARI between the partitions of the `n·p` cells where two cells share a
/// cluster iff their rows and their columns both do. Uses
/// `Σ C(xy, 2) = (Σx² Σy² − Σx Σy) / 2` over the product contingency table,
/// so the cells are never materialized.
pub fn bari(rows_a: &Partition, cols_a: &Partition, rows_b: &Partition, cols_b: &Partition) -> Result<f64> {
    if rows_a.len() != rows_b.len() || cols_a.len() != cols_b.len() {
        return Err(Error::invalid("row or column partitions differ in length between the two co-clusterings"));
    }
    let n = rows_a.len() as u128;
    let p = cols_a.len() as u128;
    let cells = n * p;
    let product_pairs = |x2: u128, y2: u128| (x2 * y2 - cells) / 2;
    let rt = sum_sq(contingency(rows_a, rows_b).into_iter().flatten());
    let ct = sum_sq(contingency(cols_a, cols_b).into_iter().flatten());
    let sizes_sq = |p: &Partition| sum_sq(p.sizes().into_iter().map(|s| s as u128));
    let index = product_pairs(rt, ct);
    let sa = product_pairs(sizes_sq(rows_a), sizes_sq(cols_a));
    let sb = product_pairs(sizes_sq(rows_b), sizes_sq(cols_b));
    Ok(adjusted(index, sa, sb, pairs(cells)))
}

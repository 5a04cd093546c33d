//! Partition point estimate minimizing a lower bound on the posterior
//! expected Variation of Information. The best cut of a complete-linkage
//! dendrogram built on `1 - s` is polished by single-item moves, since the
//! optimum is not always one of the cuts.

use super::similarity::SimilarityMatrix;
use crate::model::Partition;

/// `(1/N) Σ_a [log₂|ĉ(a)| + log₂ Σ_b s_ab − 2 log₂ Σ_{b ∈ ĉ(a)} s_ab]`
pub fn vi_lower_bound(estimate: &Partition, s: &SimilarityMatrix) -> f64 {
    let n = s.len();
    assert_eq!(estimate.len(), n, "partition and similarity sizes differ");
    let sizes = estimate.sizes();
    let labels = estimate.labels();
    let total: f64 = (0..n)
        .map(|a| {
            let row = s.row(a);
            let within: f64 = (0..n).filter(|&b| labels[b] == labels[a]).map(|b| row[b]).sum();
            (sizes[labels[a]] as f64).log2() + row.iter().sum::<f64>().log2() - 2.0 * within.log2()
        })
        .sum();
    total / n as f64
}

/// Merge sequence `(kept slot, absorbed slot)` in order of increasing height.
fn complete_linkage(s: &SimilarityMatrix) -> Vec<(usize, usize)> {
    let n = s.len();
    let mut dist: Vec<f64> = s.as_slice().iter().map(|&v| 1.0 - v).collect();
    let mut active = vec![true; n];
    let mut merges: Vec<(usize, usize, f64)> = Vec::with_capacity(n.saturating_sub(1));
    let mut chain: Vec<usize> = Vec::new();
    let mut remaining = n;
    // nearest-neighbour chain; valid because complete linkage is reducible
    while remaining > 1 {
        if chain.is_empty() {
            chain.push(active.iter().position(|&x| x).expect("an active cluster"));
        }
        let a = *chain.last().unwrap();
        let prev = chain.len().checked_sub(2).map(|k| chain[k]);
        let mut best = prev;
        let mut best_d = prev.map_or(f64::INFINITY, |p| dist[a * n + p]);
        for c in 0..n {
            if active[c] && c != a && dist[a * n + c] < best_d {
                best = Some(c);
                best_d = dist[a * n + c];
            }
        }
        let b = best.expect("another active cluster");
        if Some(b) == prev {
            chain.truncate(chain.len() - 2);
            let (keep, gone) = (a.min(b), a.max(b));
            merges.push((keep, gone, best_d));
            for c in 0..n {
                if active[c] && c != keep && c != gone {
                    let d = dist[keep * n + c].max(dist[gone * n + c]);
                    dist[keep * n + c] = d;
                    dist[c * n + keep] = d;
                }
            }
            active[gone] = false;
            remaining -= 1;
        } else {
            chain.push(b);
        }
    }
    merges.sort_by(|x, y| x.2.total_cmp(&y.2));
    merges.into_iter().map(|(k, g, _)| (k, g)).collect()
}

/// Minimizer of [`vi_lower_bound`] over dendrogram cuts followed by greedy
/// reassignment; ties go to fewer clusters.
pub fn vi_point_estimate(s: &SimilarityMatrix) -> Partition {
    let cut = best_cut(s);
    refine(cut.labels(), s)
}

/// Best dendrogram cut under [`vi_lower_bound`].
fn best_cut(s: &SimilarityMatrix) -> Partition {
    let n = s.len();
    if n == 0 {
        return Partition::new(&[]);
    }
    let row_sums: Vec<f64> = (0..n).map(|a| s.row(a).iter().sum::<f64>().log2()).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|a| vec![a]).collect();
    let mut slot: Vec<usize> = (0..n).collect();
    let mut within: Vec<f64> = (0..n).map(|a| s.get(a, a)).collect();
    let contrib = |a: usize, size: usize, within: f64| (size as f64).log2() + row_sums[a] - 2.0 * within.log2();
    let mut terms: Vec<f64> = (0..n).map(|a| contrib(a, 1, within[a])).collect();

    let mut best_obj = terms.iter().sum::<f64>();
    let mut best_labels = slot.clone();
    for (keep, gone) in complete_linkage(s) {
        let moved = std::mem::take(&mut members[gone]);
        for &a in &members[keep] {
            within[a] += moved.iter().map(|&b| s.get(a, b)).sum::<f64>();
        }
        for &b in &moved {
            within[b] += members[keep].iter().map(|&a| s.get(a, b)).sum::<f64>();
            slot[b] = keep;
        }
        members[keep].extend(moved);
        let size = members[keep].len();
        for &a in &members[keep] {
            terms[a] = contrib(a, size, within[a]);
        }
        let obj = terms.iter().sum::<f64>();
        if obj <= best_obj + 1e-12 * best_obj.abs().max(1.0) {
            best_obj = obj;
            best_labels.clone_from(&slot);
        }
    }
    Partition::new(&best_labels)
}

/// Repeatedly applies the single-item move (to another cluster or to a new
/// singleton) with the largest decrease of the bound until none decreases it.
fn refine(labels: &[usize], s: &SimilarityMatrix) -> Partition {
    let n = s.len();
    let log_rows: Vec<f64> = (0..n).map(|a| s.row(a).iter().sum::<f64>().log2()).collect();
    let mut label = labels.to_vec();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); label.iter().max().map_or(0, |m| m + 1)];
    for (a, &l) in label.iter().enumerate() {
        members[l].push(a);
    }
    let mut within: Vec<f64> = (0..n).map(|a| members[label[a]].iter().map(|&b| s.get(a, b)).sum()).collect();
    let term = |a: usize, size: usize, w: f64| (size as f64).log2() + log_rows[a] - 2.0 * w.log2();
    let tol = 1e-12;

    for _ in 0..(10 * n).max(100) {
        // (item, target cluster or usize::MAX for a new one, delta)
        let mut best: Option<(usize, usize, f64)> = None;
        for a in 0..n {
            let from = label[a];
            let from_size = members[from].len();
            let mut leave = -term(a, from_size, within[a]);
            for &b in &members[from] {
                if b != a {
                    leave += term(b, from_size - 1, within[b] - s.get(a, b)) - term(b, from_size, within[b]);
                }
            }
            let mut consider = |to: usize, to_members: &[usize]| {
                let size = to_members.len();
                let mut gain = term(a, size + 1, s.get(a, a) + to_members.iter().map(|&b| s.get(a, b)).sum::<f64>());
                for &b in to_members {
                    gain += term(b, size + 1, within[b] + s.get(a, b)) - term(b, size, within[b]);
                }
                let delta = leave + gain;
                if delta < -tol && best.is_none_or(|(_, _, d)| delta < d - tol) {
                    best = Some((a, to, delta));
                }
            };
            for (to, m) in members.iter().enumerate() {
                if to != from && !m.is_empty() {
                    consider(to, m);
                }
            }
            if from_size > 1 {
                consider(usize::MAX, &[]);
            }
        }
        let Some((a, to, _)) = best else { break };
        let from = label[a];
        let to = if to == usize::MAX {
            members.push(Vec::new());
            members.len() - 1
        } else {
            to
        };
        members[from].retain(|&b| b != a);
        for &b in &members[from] {
            within[b] -= s.get(a, b);
        }
        for &b in &members[to] {
            within[b] += s.get(a, b);
        }
        within[a] = s.get(a, a) + members[to].iter().map(|&b| s.get(a, b)).sum::<f64>();
        members[to].push(a);
        label[a] = to;
    }
    Partition::new(&label)
}

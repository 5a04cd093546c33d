//! The simulation study: simulate, fit, point-estimate, score.

use co3_core::gibbs::{run_chain, GibbsControls};
use co3_core::inference::{ari, bari, posterior_similarity, select_d, vi_point_estimate, ConfigTemplate};
use co3_core::model::{make_default_cutoffs, Cutoffs, ModelConfig, Partition};
use co3_core::simulate::{generate_dataset, ScenarioConfig};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{log_line, Check};

pub const REPLICATES: u64 = 10;
pub const ITERATIONS: u64 = 2000;

#[derive(Debug, Clone, Copy)]
pub struct Replicate {
    pub ari_rows: f64,
    pub ari_cols: f64,
    pub bari: f64,
    /// BARI of the same estimate against truth with labels permuted at random.
    pub bari_shuffled: f64,
    pub k_n: usize,
    pub k_p: usize,
}

fn shuffled(p: &Partition, rng: &mut ChaCha8Rng) -> Partition {
    let mut labels = p.labels().to_vec();
    labels.shuffle(rng);
    Partition::new(&labels)
}

/// One replicate: data seed `1000 + rep`, chain seed `500 + rep`, d = 3.
pub fn replicate(binary: bool, rep: u64) -> Replicate {
    let sc = if binary { ScenarioConfig::binary(1000 + rep) } else { ScenarioConfig::ordinal(1000 + rep) };
    let sim = generate_dataset(&sc).unwrap();
    let cut = make_default_cutoffs::<f64>(sc.c).unwrap();
    let cfg = ModelConfig::simulation_defaults(3).unwrap();
    let out = run_chain(&sim.dataset, &cut, &cfg, &GibbsControls::new(ITERATIONS, ITERATIONS / 2, 1, 500 + rep).unwrap()).unwrap();
    assert!(out.is_valid(), "chain failed: {:?}", out.failure);
    let rows = vi_point_estimate(&posterior_similarity(&out.row_draws).unwrap());
    let cols = vi_point_estimate(&posterior_similarity(&out.col_draws).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(9000 + rep);
    let (sr, sc_) = (shuffled(&sim.rows, &mut rng), shuffled(&sim.cols, &mut rng));
    Replicate {
        ari_rows: ari(&rows, &sim.rows).unwrap(),
        ari_cols: ari(&cols, &sim.cols).unwrap(),
        bari: bari(&rows, &cols, &sim.rows, &sim.cols).unwrap(),
        bari_shuffled: bari(&rows, &cols, &sr, &sc_).unwrap(),
        k_n: rows.k(),
        k_p: cols.k(),
    }
}

pub fn replicates(binary: bool) -> Vec<Replicate> {
    (0..REPLICATES).into_par_iter().map(|rep| replicate(binary, rep)).collect()
}

pub fn median(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = xs.into_iter().collect();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) }
}

pub fn ordinal_check() -> Check {
    let reps = replicates(false);
    for (i, r) in reps.iter().enumerate() {
        log_line(format!("ordinal rep {i}: {r:?}"));
    }
    let mr = median(reps.iter().map(|r| r.ari_rows));
    let mc = median(reps.iter().map(|r| r.ari_cols));
    Check::new(mr >= 0.75 && mc >= 0.85, format!("ordinal median ARI rows {mr:.3} (limit 0.75), cols {mc:.3} (limit 0.85)"))
}

pub fn binary_check() -> Check {
    let reps = replicates(true);
    for (i, r) in reps.iter().enumerate() {
        log_line(format!("binary rep {i}: {r:?}"));
    }
    let real = median(reps.iter().map(|r| r.bari));
    let base = median(reps.iter().map(|r| r.bari_shuffled));
    Check::new(
        real - base >= 0.4,
        format!("binary median BARI {real:.3} vs shuffled-label {base:.3}, gap {:.3} (limit 0.4)", real - base),
    )
}

/// LPML at d = 3 against d = 1 on ordinal data from 3-dimensional factors.
pub fn lpml_check() -> Check {
    let wins: Vec<(f64, f64)> = (0..REPLICATES)
        .into_par_iter()
        .map(|rep| {
            let sim = generate_dataset(&ScenarioConfig::ordinal(2000 + rep)).unwrap();
            let cut: Cutoffs<f64> = make_default_cutoffs(3).unwrap();
            let c = GibbsControls::new(ITERATIONS, ITERATIONS / 2, 1, 70 + rep).unwrap();
            let r = select_d(&sim.dataset, &cut, &ConfigTemplate::default(), &[1, 3], &c).unwrap();
            (r.per_d[&3], r.per_d[&1])
        })
        .collect();
    for (i, (l3, l1)) in wins.iter().enumerate() {
        log_line(format!("rep {i}: LPML d=3 {l3:.1}, d=1 {l1:.1}"));
    }
    let count = wins.iter().filter(|(l3, l1)| l3 > l1).count();
    Check::new(count >= 8, format!("LPML(d=3) > LPML(d=1) in {count} of {REPLICATES} replicates (limit 8)"))
}

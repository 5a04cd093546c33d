use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use co3_core::gibbs::{run_chain, GibbsControls};
use co3_core::inference::{ari, bari, posterior_similarity, select_d, vi_point_estimate, SimilarityMatrix};
use co3_core::model::{make_default_cutoffs, Cutoffs, OrdinalDataset, Partition};
use co3_core::prior::{expected_k, prior_k_pmf};
use co3_core::random::derive_seed;
use co3_core::simulate::{generate_dataset, ScenarioConfig};
use co3_core::Real;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{FitSettings, KeyValues, Precision, SimulateSettings};
use crate::error::{CliError, Result};
use crate::ingest::{format_dataset, read_dataset};
use crate::manifest::{InputRecord, OutputDir, RunManifest};

pub const PARTITION_ROWS: &str = "partition_rows.csv";
pub const PARTITION_COLS: &str = "partition_cols.csv";

/// True labels of a simulated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Truth {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub censored: usize,
    pub censor_target: usize,
    pub scenario: ScenarioConfig,
}

impl Truth {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input { path: path.into(), msg: e.to_string() })
    }

    pub fn partitions(&self) -> (Partition, Partition) {
        (Partition::new(&self.rows), Partition::new(&self.cols))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub ari_rows: f64,
    pub ari_cols: f64,
    pub bari: f64,
    pub k_hat_n: usize,
    pub k_hat_p: usize,
    pub k_true_n: usize,
    pub k_true_p: usize,
}

pub fn score(rows: &Partition, cols: &Partition, truth: &Truth) -> Result<Scores> {
    let (tr, tc) = truth.partitions();
    Ok(Scores {
        ari_rows: ari(rows, &tr)?,
        ari_cols: ari(cols, &tc)?,
        bari: bari(rows, cols, &tr, &tc)?,
        k_hat_n: rows.k(),
        k_hat_p: cols.k(),
        k_true_n: tr.k(),
        k_true_p: tc.k(),
    })
}

fn load_config(path: Option<&Path>) -> Result<KeyValues> {
    path.map_or_else(|| Ok(KeyValues::empty()), KeyValues::load)
}

fn input_record(path: &Path) -> Result<InputRecord> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(InputRecord::new(path, &bytes))
}

/// Generates one dataset, or `replicates` datasets in `rep_XXX/` folders with
/// seeds derived from the configured one.
pub fn cmd_simulate(config_path: Option<&Path>, out_dir: &Path) -> Result<RunManifest> {
    let started = Instant::now();
    let settings = SimulateSettings::read(load_config(config_path)?)?;
    let mut out = OutputDir::create(out_dir, started)?;
    let base = settings.scenario.seed;
    let seeds: Vec<u64> = if settings.replicates == 1 {
        vec![base]
    } else {
        (0..settings.replicates as u64).map(|r| derive_seed(base, &[r])).collect()
    };
    let sims = seeds
        .par_iter()
        .map(|&seed| generate_dataset(&ScenarioConfig { seed, ..settings.scenario.clone() }))
        .collect::<co3_core::Result<Vec<_>>>()?;
    let width = settings.replicates.to_string().len().max(3);
    let mut replicates = Vec::new();
    for (r, (sim, &seed)) in sims.iter().zip(&seeds).enumerate() {
        let prefix = if settings.replicates == 1 { String::new() } else { format!("rep_{r:0width$}/") };
        if sim.censored < sim.censor_target {
            log::warn!("replicate {r}: only {} of {} entries could be censored", sim.censored, sim.censor_target);
        }
        out.write(&format!("{prefix}data.csv"), format_dataset(&sim.dataset))?;
        let truth = Truth {
            rows: sim.rows.labels().to_vec(),
            cols: sim.cols.labels().to_vec(),
            censored: sim.censored,
            censor_target: sim.censor_target,
            scenario: ScenarioConfig { seed, ..settings.scenario.clone() },
        };
        out.write_json(&format!("{prefix}truth.json"), &truth)?;
        replicates.push(json!({ "dir": prefix, "seed": seed, "censored": sim.censored }));
    }
    let inputs = config_path.map(input_record).transpose()?.into_iter().collect();
    out.finish("simulate", Some(base), config_path, &settings, inputs, json!({ "replicates": replicates }))
}

struct FitArtifacts {
    rows: Partition,
    cols: Partition,
    sim_rows: SimilarityMatrix,
    sim_cols: SimilarityMatrix,
    traces: String,
    lpml: f64,
    draws: usize,
}

fn fit_chain<T: Real>(data: &OrdinalDataset, settings: &FitSettings, controls: &GibbsControls) -> Result<FitArtifacts> {
    let cutoffs: Cutoffs<T> = make_default_cutoffs(data.c())?;
    let model = settings.model::<T>(settings.d)?;
    let out = run_chain(data, &cutoffs, &model, controls)?;
    if let Some(e) = out.failure {
        return Err(e.into());
    }
    let sim_rows = posterior_similarity(&out.row_draws)?;
    let sim_cols = posterior_similarity(&out.col_draws)?;
    let mut traces = String::from("iteration,sigma1_sq,sigma2_sq,k_n,k_p\n");
    for t in 0..out.len() {
        let _ = writeln!(
            traces,
            "{},{},{},{},{}",
            out.iterations[t],
            out.sigma1_sq[t].f64(),
            out.sigma2_sq[t].f64(),
            out.k_n[t],
            out.k_p[t]
        );
    }
    Ok(FitArtifacts {
        rows: vi_point_estimate(&sim_rows),
        cols: vi_point_estimate(&sim_cols),
        sim_rows,
        sim_cols,
        traces,
        lpml: out.lpml()?,
        draws: out.len(),
    })
}

fn format_partition(p: &Partition) -> String {
    let mut s = String::from("index,cluster\n");
    for (i, l) in p.labels().iter().enumerate() {
        let _ = writeln!(s, "{i},{l}");
    }
    s
}

fn format_similarity(s: &SimilarityMatrix) -> String {
    let mut out = String::new();
    for a in 0..s.len() {
        let row: Vec<String> = s.row(a).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn read_partition(path: &Path) -> Result<Partition> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Input { path: path.into(), msg: e.to_string() })?;
    let mut labels = Vec::new();
    for (row, rec) in reader.deserialize::<(usize, usize)>().enumerate() {
        let (idx, label) = rec.map_err(|e| CliError::Ingest { path: path.into(), row: row + 1, col: 1, msg: e.to_string() })?;
        if idx != row {
            return Err(CliError::Ingest { path: path.into(), row: row + 1, col: 1, msg: format!("expected index {row}, found {idx}") });
        }
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(CliError::Input { path: path.into(), msg: "empty partition".into() });
    }
    Ok(Partition::new(&labels))
}

/// Runs one chain and writes point-estimate partitions, posterior similarity
/// matrices, traces and an LPML summary. With `truth`, ARI and BARI against
/// the true labels are added to the summary and the manifest.
pub fn cmd_fit(data_path: &Path, config_path: Option<&Path>, out_dir: &Path, truth: Option<&Path>) -> Result<RunManifest> {
    let started = Instant::now();
    let settings = FitSettings::read(load_config(config_path)?)?;
    let controls = settings.controls()?;
    let (data, bytes) = read_dataset(data_path, &settings.ingest)?;
    let truth = truth.map(|p| Truth::read(p).map(|t| (p, t))).transpose()?;
    log::info!("fitting {}x{} data with c = {}, d = {}", data.n(), data.p(), data.c(), settings.d);
    let fit = match settings.precision {
        Precision::F64 => fit_chain::<f64>(&data, &settings, &controls)?,
        Precision::F32 => fit_chain::<f32>(&data, &settings, &controls)?,
    };
    let scores = match &truth {
        Some((p, t)) => {
            if t.rows.len() != data.n() || t.cols.len() != data.p() {
                return Err(CliError::Input { path: p.to_path_buf(), msg: "truth dimensions do not match the data".into() });
            }
            Some(score(&fit.rows, &fit.cols, t)?)
        }
        None => None,
    };
    let summary = json!({
        "n": data.n(),
        "p": data.p(),
        "c": data.c(),
        "censored": data.censored_count(),
        "d": settings.d,
        "stored_draws": fit.draws,
        "lpml": fit.lpml,
        "k_hat_n": fit.rows.k(),
        "k_hat_p": fit.cols.k(),
        "scores": scores,
    });

    let mut out = OutputDir::create(out_dir, started)?;
    out.write(PARTITION_ROWS, format_partition(&fit.rows))?;
    out.write(PARTITION_COLS, format_partition(&fit.cols))?;
    out.write("similarity_rows.csv", format_similarity(&fit.sim_rows))?;
    out.write("similarity_cols.csv", format_similarity(&fit.sim_cols))?;
    out.write("traces.csv", &fit.traces)?;
    out.write_json("summary.json", &summary)?;

    let mut inputs = vec![InputRecord::new(data_path, &bytes)];
    if let Some(p) = config_path {
        inputs.push(input_record(p)?);
    }
    if let Some((p, _)) = truth {
        inputs.push(input_record(p)?);
    }
    out.finish("fit", Some(settings.seed), config_path, &settings, inputs, summary)
}

/// LPML over `d_min..=d_max`, one chain per `d`, written to `lpml.csv`.
pub fn cmd_select_d(data_path: &Path, config_path: Option<&Path>, d_min: usize, d_max: usize, out_dir: &Path) -> Result<RunManifest> {
    let started = Instant::now();
    if d_min == 0 || d_max < d_min {
        return Err(CliError::Other(format!("invalid grid {d_min}..={d_max}")));
    }
    let settings = FitSettings::read(load_config(config_path)?)?;
    let controls = settings.controls()?;
    let (data, bytes) = read_dataset(data_path, &settings.ingest)?;
    let grid: Vec<usize> = (d_min..=d_max).collect();
    let report = match settings.precision {
        Precision::F64 => select_d(&data, &make_default_cutoffs::<f64>(data.c())?, &settings.template::<f64>()?, &grid, &controls)?,
        Precision::F32 => select_d(&data, &make_default_cutoffs::<f32>(data.c())?, &settings.template::<f32>()?, &grid, &controls)?,
    };
    let mut csv = String::from("d,lpml\n");
    for d in &grid {
        match report.per_d.get(d) {
            Some(v) => {
                let _ = writeln!(csv, "{d},{v}");
            }
            None => {
                let _ = writeln!(csv, "{d},");
            }
        }
    }
    let mut out = OutputDir::create(out_dir, started)?;
    out.write("lpml.csv", csv)?;
    let mut inputs = vec![InputRecord::new(data_path, &bytes)];
    if let Some(p) = config_path {
        inputs.push(input_record(p)?);
    }
    let results = serde_json::to_value(&report).map_err(|e| CliError::Other(e.to_string()))?;
    out.finish("select-d", Some(settings.seed), config_path, &settings, inputs, results)
}

/// Scores the partitions written by `fit` in `est_dir` against a truth file.
pub fn cmd_evaluate(est_dir: &Path, truth_path: &Path) -> Result<RunManifest> {
    let started = Instant::now();
    let truth = Truth::read(truth_path)?;
    let rows_path = est_dir.join(PARTITION_ROWS);
    let cols_path = est_dir.join(PARTITION_COLS);
    let rows = read_partition(&rows_path)?;
    let cols = read_partition(&cols_path)?;
    if rows.len() != truth.rows.len() || cols.len() != truth.cols.len() {
        return Err(CliError::Input { path: truth_path.into(), msg: "truth dimensions do not match the estimate".into() });
    }
    let scores = score(&rows, &cols, &truth)?;
    let mut out = OutputDir::create(est_dir, started)?;
    out.write_json("evaluation.json", &scores)?;
    let inputs = vec![input_record(truth_path)?, input_record(&rows_path)?, input_record(&cols_path)?];
    let results = serde_json::to_value(scores).map_err(|e| CliError::Other(e.to_string()))?;
    out.finish("evaluate", None, None, &json!({ "est_dir": est_dir, "truth": truth_path }), inputs, results)
}

/// Prior pmf of the number of co-clusters `k = k_n k_p`.
pub fn cmd_prior_k(n: usize, p: usize, alpha1: f64, alpha2: f64, out_dir: &Path) -> Result<RunManifest> {
    let started = Instant::now();
    let prior = prior_k_pmf(n, p, alpha1, alpha2)?;
    let mut csv = String::from("k,probability\n");
    for (k, v) in &prior.pmf {
        let _ = writeln!(csv, "{k},{v}");
    }
    let mut out = OutputDir::create(out_dir, started)?;
    out.write("prior_k.csv", csv)?;
    let config = json!({ "n": n, "p": p, "alpha1": alpha1, "alpha2": alpha2 });
    let results = json!({ "expected_k": expected_k(n, p, alpha1, alpha2), "total": prior.total() });
    out.finish("prior-k", None, None, &config, vec![], results)
}

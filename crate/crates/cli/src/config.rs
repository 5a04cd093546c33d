//! Flat `key = value` configuration files. `#` starts a comment; blank lines
//! are ignored. Every key must be consumed by the command reading the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use co3_core::gibbs::GibbsControls;
use co3_core::inference::ConfigTemplate;
use co3_core::model::{BaseMeasure, Initialization, ModelConfig, SigmaMode};
use co3_core::simulate::{CensorMode, ScenarioConfig};
use co3_core::Real;
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    path: PathBuf,
    entries: BTreeMap<String, (usize, String)>,
}

impl KeyValues {
    pub fn parse(path: impl Into<PathBuf>, text: &str) -> Result<Self> {
        let path = path.into();
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((k, v)) = content.split_once('=') else {
                return Err(CliError::Config { path, line, msg: format!("expected key = value, got {content:?}") });
            };
            let key = k.trim().to_ascii_lowercase();
            if key.is_empty() {
                return Err(CliError::Config { path, line, msg: "empty key".into() });
            }
            if let Some((first, _)) = entries.insert(key.clone(), (line, v.trim().to_string())) {
                return Err(CliError::Config { path, line, msg: format!("{key} already set on line {first}") });
            }
        }
        Ok(Self { path, entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(path, &text)
    }

    /// Empty configuration: every setting takes its default.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn error(&self, line: usize, msg: String) -> CliError {
        CliError::Config { path: self.path.clone(), line, msg }
    }

    pub fn take<V: FromStr>(&mut self, key: &str) -> Result<Option<V>>
    where
        V::Err: std::fmt::Display,
    {
        match self.entries.remove(key) {
            None => Ok(None),
            Some((line, raw)) => raw
                .parse::<V>()
                .map(Some)
                .map_err(|e| self.error(line, format!("bad value {raw:?} for {key}: {e}"))),
        }
    }

    pub fn take_or<V: FromStr>(&mut self, key: &str, default: V) -> Result<V>
    where
        V::Err: std::fmt::Display,
    {
        Ok(self.take(key)?.unwrap_or(default))
    }

    /// Parses `key` with a custom rule, reporting failures at its line.
    pub fn take_with<V>(&mut self, key: &str, parse: impl FnOnce(&str) -> std::result::Result<V, String>) -> Result<Option<V>> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some((line, raw)) => parse(&raw).map(Some).map_err(|msg| self.error(line, format!("{key}: {msg}"))),
        }
    }

    /// Fails on the first key nobody asked for.
    pub fn finish(self) -> Result<()> {
        match self.entries.into_iter().min_by_key(|(_, (line, _))| *line) {
            None => Ok(()),
            Some((key, (line, _))) => {
                Err(CliError::Config { path: self.path, line, msg: format!("unknown key {key}") })
            }
        }
    }
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("expected true or false, got {s:?}")),
    }
}

fn take_bool(kv: &mut KeyValues, key: &str, default: bool) -> Result<bool> {
    Ok(kv.take_with(key, parse_bool)?.unwrap_or(default))
}

/// How the CSV is read.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngestSettings {
    pub header: bool,
    /// Codes are `{0, 1}` and are shifted to `{1, 2}`.
    pub binary01: bool,
    /// Number of categories; inferred as the largest code when absent.
    pub categories: Option<u32>,
}

impl IngestSettings {
    fn read(kv: &mut KeyValues) -> Result<Self> {
        Ok(Self {
            header: take_bool(kv, "header", false)?,
            binary01: take_bool(kv, "binary01", false)?,
            categories: kv.take("categories")?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F32,
    F64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SigmaSettings {
    Fixed { sigma1_sq: f64, sigma2_sq: f64 },
    Hyperprior { shape1: f64, rate1: f64, shape2: f64, rate2: f64 },
}

impl SigmaSettings {
    fn to_mode<T: Real>(&self) -> SigmaMode<T> {
        match *self {
            SigmaSettings::Fixed { sigma1_sq, sigma2_sq } => SigmaMode::Fixed { sigma1_sq: T::of(sigma1_sq), sigma2_sq: T::of(sigma2_sq) },
            SigmaSettings::Hyperprior { shape1, rate1, shape2, rate2 } => SigmaMode::Hyperprior {
                shape1: T::of(shape1),
                rate1: T::of(rate1),
                shape2: T::of(shape2),
                rate2: T::of(rate2),
            },
        }
    }
}

/// Everything `fit` and `select-d` read from a configuration file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSettings {
    pub ingest: IngestSettings,
    pub d: usize,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Column variances of the row base measure; `1/√d` each when absent.
    pub u1: Option<[f64; 2]>,
    pub u2: Option<[f64; 2]>,
    pub sigma: SigmaSettings,
    pub iterations: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
    pub parallel_latent: bool,
    pub init: Initialization,
    pub precision: Precision,
}

fn parse_pair(s: &str) -> std::result::Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let nums: std::result::Result<Vec<f64>, _> = parts.iter().map(|p| p.parse::<f64>()).collect();
    match nums {
        Ok(v) if v.len() == 1 => Ok([v[0], v[0]]),
        Ok(v) if v.len() == 2 => Ok([v[0], v[1]]),
        Ok(_) => Err("expected one or two comma-separated numbers".into()),
        Err(e) => Err(e.to_string()),
    }
}

impl FitSettings {
    pub fn read(mut kv: KeyValues) -> Result<Self> {
        let ingest = IngestSettings::read(&mut kv)?;
        let d = kv.take_or("d", 2usize)?;
        let alpha1 = kv.take_or("alpha1", 1.0)?;
        let alpha2 = kv.take_or("alpha2", 1.0)?;
        let u1 = kv.take_with("u1", parse_pair)?;
        let u2 = kv.take_with("u2", parse_pair)?;
        let hyper = kv
            .take_with("sigma_mode", |s| match s {
                "fixed" => Ok(false),
                "hyperprior" => Ok(true),
                _ => Err(format!("expected fixed or hyperprior, got {s:?}")),
            })?
            .unwrap_or(false);
        let sigma = if hyper {
            SigmaSettings::Hyperprior {
                shape1: kv.take_or("shape1", 2.0)?,
                rate1: kv.take_or("rate1", 0.1)?,
                shape2: kv.take_or("shape2", 2.0)?,
                rate2: kv.take_or("rate2", 1.5)?,
            }
        } else {
            SigmaSettings::Fixed { sigma1_sq: kv.take_or("sigma1_sq", 0.1)?, sigma2_sq: kv.take_or("sigma2_sq", 1.5)? }
        };
        let iterations = kv.take_or("iterations", 2000)?;
        let burn_in = kv.take_or("burn_in", iterations / 2)?;
        let thin = kv.take_or("thin", 1)?;
        let seed = kv.take_or("seed", 1)?;
        let parallel_latent = take_bool(&mut kv, "parallel_latent", false)?;
        let init = kv
            .take_with("init", |s| match s {
                "singletons" => Ok(Initialization::Singletons),
                "one-cluster" => Ok(Initialization::OneCluster),
                _ => Err(format!("expected singletons or one-cluster, got {s:?}")),
            })?
            .unwrap_or_default();
        let precision = kv
            .take_with("precision", |s| match s {
                "f64" => Ok(Precision::F64),
                "f32" => Ok(Precision::F32),
                _ => Err(format!("expected f64 or f32, got {s:?}")),
            })?
            .unwrap_or(Precision::F64);
        kv.finish()?;
        Ok(Self { ingest, d, alpha1, alpha2, u1, u2, sigma, iterations, burn_in, thin, seed, parallel_latent, init, precision })
    }

    pub fn controls(&self) -> Result<GibbsControls> {
        let mut c = GibbsControls::new(self.iterations, self.burn_in, self.thin, self.seed)?;
        c.parallel_latent = self.parallel_latent;
        c.init = self.init;
        Ok(c)
    }

    pub fn model<T: Real>(&self, d: usize) -> Result<ModelConfig<T>> {
        if d == 0 {
            return Err(co3_core::Error::InvalidArgument("latent dimension must be at least 1".into()).into());
        }
        let default_u = 1.0 / (d as f64).sqrt();
        let base = |u: Option<[f64; 2]>| {
            let [a, b] = u.unwrap_or([default_u, default_u]);
            BaseMeasure::new(
                [vec![T::zero(); d], vec![T::zero(); d]],
                [T::of(a), T::of(b)],
                co3_core::linalg::Matrix::identity(d),
            )
        };
        Ok(ModelConfig::new(T::of(self.alpha1), T::of(self.alpha2), base(self.u1)?, base(self.u2)?, self.sigma.to_mode())?)
    }

    pub fn template<T: Real>(&self) -> Result<ConfigTemplate<T>> {
        if self.u1.is_some() || self.u2.is_some() {
            return Err(CliError::Other("u1/u2 cannot be set for select-d; they scale as 1/sqrt(d)".into()));
        }
        Ok(ConfigTemplate { alpha1: T::of(self.alpha1), alpha2: T::of(self.alpha2), sigma: self.sigma.to_mode() })
    }
}

/// Settings of `simulate`: a scenario plus the number of replicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateSettings {
    pub scenario: ScenarioConfig,
    pub replicates: usize,
}

impl SimulateSettings {
    pub fn read(mut kv: KeyValues) -> Result<Self> {
        let seed = kv.take_or("seed", 1u64)?;
        let mut sc = kv
            .take_with("scenario", |s| match s {
                "ordinal" => Ok(ScenarioConfig::ordinal(seed)),
                "binary" => Ok(ScenarioConfig::binary(seed)),
                _ => Err(format!("expected ordinal or binary, got {s:?}")),
            })?
            .unwrap_or_else(|| ScenarioConfig::ordinal(seed));
        sc.n = kv.take_or("n", sc.n)?;
        sc.p = kv.take_or("p", sc.p)?;
        sc.c = kv.take_or("c", sc.c)?;
        sc.d = kv.take_or("d", sc.d)?;
        sc.n_row_components = kv.take_or("row_components", sc.n_row_components)?;
        sc.n_col_components = kv.take_or("col_components", sc.n_col_components)?;
        sc.component_separation = kv.take_or("separation", sc.component_separation)?;
        sc.jitter_var = kv.take_or("jitter_var", sc.jitter_var)?;
        sc.sigma1_sq = kv.take_or("sigma1_sq", sc.sigma1_sq)?;
        sc.sigma2_sq = kv.take_or("sigma2_sq", sc.sigma2_sq)?;
        sc.censor_rate = kv.take_or("censor_rate", sc.censor_rate)?;
        if let Some(m) = kv.take_with("censor_mode", |s| match s {
            "informative" => Ok(CensorMode::Informative),
            "random" => Ok(CensorMode::Random),
            _ => Err(format!("expected informative or random, got {s:?}")),
        })? {
            sc.censor_mode = m;
        }
        sc.target_category = kv.take_or("target_category", sc.target_category)?;
        let replicates = kv.take_or("replicates", 1usize)?;
        kv.finish()?;
        if replicates == 0 {
            return Err(CliError::Other("replicates must be at least 1".into()));
        }
        sc.validate()?;
        Ok(Self { scenario: sc, replicates })
    }
}

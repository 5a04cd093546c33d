use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

impl InputRecord {
    pub fn new(path: &Path, bytes: &[u8]) -> Self {
        Self { path: path.display().to_string(), bytes: bytes.len(), sha256: sha256_hex(bytes) }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Audit record written next to the outputs of every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    pub seed: Option<u64>,
    pub config_path: Option<String>,
    pub config: serde_json::Value,
    pub inputs: Vec<InputRecord>,
    /// Paths relative to the output directory, in the order written.
    pub outputs: Vec<String>,
    pub wall_time_secs: f64,
    pub results: serde_json::Value,
}

impl RunManifest {
    pub fn file_name(subcommand: &str) -> String {
        format!("{subcommand}.manifest.json")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input { path: path.into(), msg: e.to_string() })
    }
}

/// Collects the files written by one command and produces its manifest.
pub struct OutputDir {
    dir: PathBuf,
    files: Vec<String>,
    started: Instant,
}

impl OutputDir {
    /// `started` is when the command began; the manifest reports the time since.
    pub fn create(dir: &Path, started: Instant) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new(), started })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<()> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn write_json<S: Serialize>(&mut self, name: &str, value: &S) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Other(e.to_string()))?;
        text.push('\n');
        self.write(name, text)
    }

    /// Writes `<subcommand>.manifest.json` and returns the manifest.
    pub fn finish(
        self,
        subcommand: &str,
        seed: Option<u64>,
        config_path: Option<&Path>,
        config: &impl Serialize,
        inputs: Vec<InputRecord>,
        results: serde_json::Value,
    ) -> Result<RunManifest> {
        let manifest = RunManifest {
            subcommand: subcommand.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config_path: config_path.map(|p| p.display().to_string()),
            config: serde_json::to_value(config).map_err(|e| CliError::Other(e.to_string()))?,
            inputs,
            outputs: self.files.clone(),
            wall_time_secs: self.started.elapsed().as_secs_f64(),
            results,
        };
        let path = self.dir.join(RunManifest::file_name(subcommand));
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Other(e.to_string()))?;
        std::fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(manifest)
    }
}

//! Statistical and brute-force checks shared by this crate's tests and the
//! command-line acceptance suite.
#![allow(dead_code)]

pub mod geweke;
pub mod metrics;
pub mod prior;
pub mod study;
pub mod truncnorm;
pub mod urn;

/// Outcome of one check with a one-line explanation.
#[derive(Debug, Clone)]
pub struct Check {
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }

    /// Combines several checks; passes only if all do.
    pub fn all(parts: Vec<Check>) -> Self {
        let pass = parts.iter().all(|c| c.pass);
        let detail = parts.iter().map(|c| c.detail.as_str()).collect::<Vec<_>>().join("; ");
        Self { pass, detail }
    }

    #[track_caller]
    pub fn assert(&self) {
        println!("{}", self.detail);
        assert!(self.pass, "{}", self.detail);
    }
}

/// Diagnostic output, visible with `--nocapture`.
pub fn log_line(s: String) {
    println!("  {s}");
}

//! Run-wide settings shared by the command-line subcommands.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tol: f64,
    pub step: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { tol: 1e-9, step: 1e-2, seed: 0, output_dir: PathBuf::from("."), format: OutputFormat::Json }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(domain(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(domain(format!("step must be positive, got {}", self.step)));
        }
        Ok(())
    }
}

/// Parses a decimal λ or the exact token `1/sqrt5` (also `1/sqrt(5)`).
pub fn parse_lambda(s: &str) -> Result<f64> {
    let t = s.trim();
    match t {
        "1/sqrt5" | "1/sqrt(5)" => Ok(crate::constructions::inv_sqrt5()),
        _ => {
            t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| domain(format!("cannot parse lambda {s:?}")))
        }
    }
}

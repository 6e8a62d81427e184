//! Config file sections and resolution of the per-command settings.
//!
//! Precedence: command-line flag, then config file key, then built-in default.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub formats: Option<Vec<String>>,
    pub cache: Option<CacheSection>,
    pub verify: Option<VerifySection>,
    pub spectrum: Option<SpectrumSection>,
    pub fss: Option<FssSection>,
    pub hypotheses: Option<HypothesesSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheSection {
    pub dir: Option<PathBuf>,
    pub enabled: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub section: Option<String>,
    pub filter: Option<String>,
    pub n: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub field: Option<String>,
    pub degree_bound: Option<usize>,
    pub fail_fast: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    pub model: Option<String>,
    pub degrees: Option<Vec<usize>>,
    pub h_values: Option<Vec<f64>>,
    pub h_steps: Option<usize>,
    pub slope_tol: Option<f64>,
    pub r_max: Option<usize>,
    pub verify_criterion: Option<usize>,
    pub eta: Option<Vec<f64>>,
    pub eq_tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FssSection {
    pub model: Option<String>,
    pub r_max: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesesSection {
    pub check: Option<String>,
    pub phi: Option<String>,
    pub n: Option<usize>,
    pub radius: Option<f64>,
    pub grid: Option<usize>,
    pub fill: Option<usize>,
    pub epsilon: Option<f64>,
    pub scale: Option<f64>,
    pub eta_constant: Option<f64>,
    pub complete: Option<bool>,
    pub margin: Option<f64>,
    pub bidegree: Option<[usize; 2]>,
    pub model: Option<String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<ConfigFile, CliError> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let src = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&src).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Resolved settings of `verify`; this is what the cache key and the report see.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub filter: String,
    pub n_set: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub field: String,
    pub degree_bound: Option<usize>,
    pub mutation: Option<String>,
    pub fail_fast: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub model: String,
    pub degrees: Vec<usize>,
    pub h_values: Vec<f64>,
    pub slope_tol: f64,
    pub r_max: usize,
    pub verify_criterion: Option<usize>,
    pub eta: Vec<f64>,
    pub eq_tol: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FssConfig {
    pub model: String,
    pub r_max: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypothesesConfig {
    pub check: String,
    pub phi: String,
    pub n: usize,
    pub radius: f64,
    pub grid: usize,
    pub fill: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub scale: f64,
    pub eta_constant: Option<f64>,
    pub complete: bool,
    pub margin: f64,
    pub bidegree: Option<[usize; 2]>,
    pub model: Option<String>,
}

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Config(msg()))
    }
}

/// Parses `"p,q"`.
pub fn parse_pair(s: &str) -> Result<[usize; 2], CliError> {
    let bad = || CliError::Config(format!("expected `p,q`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok([a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?])
}

/// Parses `"r=2"` or `"2"`.
pub fn parse_criterion(s: &str) -> Result<usize, CliError> {
    let v = s.strip_prefix("r=").unwrap_or(s);
    v.trim().parse().map_err(|_| CliError::Config(format!("expected `r=<page>`, got `{s}`")))
}

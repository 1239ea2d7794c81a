use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{DEFAULT_BINS, DEFAULT_EPSILON};
use crate::ensembles::EnsembleKind;
use crate::error::{Error, Result};

/// Environment variable consulted for the worker count when `--workers` is absent.
pub const WORKERS_ENV: &str = "SPECERGO_WORKERS";

/// Sizes of the full-scale sweep.
pub const FULL_SIZES: [usize; 6] = [64, 128, 256, 512, 768, 1024];
pub const FULL_ENSEMBLE_SIZE: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kinds: Vec<EnsembleKind>,
    pub sizes: Vec<usize>,
    pub count_m: usize,
    pub k_bins: usize,
    pub epsilon: f64,
    pub master_seed: u64,
    pub chunk_size: usize,
    pub workers: usize,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            kinds: EnsembleKind::ALL.to_vec(),
            sizes: FULL_SIZES.to_vec(),
            count_m: FULL_ENSEMBLE_SIZE,
            k_bins: DEFAULT_BINS,
            epsilon: DEFAULT_EPSILON,
            master_seed: 42,
            chunk_size: 8,
            workers: 1,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.kinds.is_empty() {
            return Err(Error::invalid("at least one ensemble kind is required"));
        }
        if self.kinds.iter().collect::<BTreeSet<_>>().len() != self.kinds.len() {
            return Err(Error::invalid("ensemble kinds must not repeat"));
        }
        if self.sizes.is_empty() {
            return Err(Error::invalid("at least one size is required"));
        }
        if self.sizes.contains(&0) {
            return Err(Error::invalid("sizes must be positive"));
        }
        if self.sizes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("sizes must be strictly ascending"));
        }
        for (name, value) in [
            ("ensemble size", self.count_m),
            ("bins", self.k_bins),
            ("chunk size", self.chunk_size),
            ("workers", self.workers),
        ] {
            if value == 0 {
                return Err(Error::invalid(format!("{name} must be positive")));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::invalid("epsilon must be positive and finite"));
        }
        Ok(())
    }
}

/// Every field optional; fields present override the defaults and are in
/// turn overridden by command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialRunConfig {
    pub kinds: Option<Vec<EnsembleKind>>,
    pub sizes: Option<Vec<usize>>,
    pub count_m: Option<usize>,
    pub k_bins: Option<usize>,
    pub epsilon: Option<f64>,
    pub master_seed: Option<u64>,
    pub chunk_size: Option<usize>,
    pub workers: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl PartialRunConfig {
    /// `self` wins over `lower` field by field.
    pub fn or(self, lower: PartialRunConfig) -> PartialRunConfig {
        PartialRunConfig {
            kinds: self.kinds.or(lower.kinds),
            sizes: self.sizes.or(lower.sizes),
            count_m: self.count_m.or(lower.count_m),
            k_bins: self.k_bins.or(lower.k_bins),
            epsilon: self.epsilon.or(lower.epsilon),
            master_seed: self.master_seed.or(lower.master_seed),
            chunk_size: self.chunk_size.or(lower.chunk_size),
            workers: self.workers.or(lower.workers),
            output_dir: self.output_dir.or(lower.output_dir),
        }
    }

    pub fn resolve(self) -> Result<RunConfig> {
        let d = RunConfig::default();
        let config = RunConfig {
            kinds: self.kinds.unwrap_or(d.kinds),
            sizes: self.sizes.unwrap_or(d.sizes),
            count_m: self.count_m.unwrap_or(d.count_m),
            k_bins: self.k_bins.unwrap_or(d.k_bins),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            master_seed: self.master_seed.unwrap_or(d.master_seed),
            chunk_size: self.chunk_size.unwrap_or(d.chunk_size),
            workers: self.workers.unwrap_or(d.workers),
            output_dir: self.output_dir.unwrap_or(d.output_dir),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Reads a config file. `.json` files may be either a bare config object or
/// an analysis export carrying the config under `"config"`; anything else is
/// parsed as TOML.
pub fn load_config_file(path: &Path) -> Result<PartialRunConfig> {
    let text = std::fs::read_to_string(path)?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let value: serde_json::Value = serde_json::from_str(&text)?;
        let inner = match value.get("config") {
            Some(config) => config.clone(),
            None => value,
        };
        Ok(serde_json::from_value(inner)?)
    } else {
        toml::from_str(&text).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
    }
}

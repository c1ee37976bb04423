//! Run configuration: CLI flags optionally backed by a JSON config file.
//! Flags win over the file; the fully resolved config is echoed into every
//! report header for reproducibility.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// The on-disk run-config document. Every field is optional; the subcommand
/// decides which ones it needs.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<String>,
    pub poly: Option<String>,
    pub nvars: Option<usize>,
    pub variant: Option<String>,
    pub y: Option<Vec<i64>>,
    pub p: Option<u64>,
    pub primes: Option<Vec<u64>>,
    pub m: Option<u32>,
    pub m_list: Option<Vec<u32>>,
    pub m_range: Option<[u32; 2]>,
    pub mmax: Option<u32>,
    pub u: Option<u64>,
    pub kmax: Option<u32>,
    pub order: Option<u64>,
    pub index: Option<u64>,
    pub budget: Option<u128>,
    pub resolution_data: Option<String>,
    pub critical_values: Option<Vec<i64>>,
    pub search_bound: Option<u64>,
    pub sigma: Option<f64>,
    pub sigma_source: Option<String>,
    pub declared_c: Option<f64>,
    pub fit_lambdas: Option<Vec<f64>>,
    pub fit_period: Option<u32>,
    pub weil_dmax: Option<u64>,
    pub format: Option<String>,
    pub threads: Option<usize>,
    pub output: Option<String>,
}

impl FileConfig {
    pub fn load(path: &str) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {path}"))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config file {path}"))
    }
}

/// Picks the flag value when set, else the config-file value.
pub fn pick<T: Clone>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

/// Default enumeration budget: the `--budget` flag, else the config file,
/// else the IGUSA_BUDGET environment variable, else 10^8.
pub fn resolve_budget(flag: Option<u128>, file: Option<u128>) -> u128 {
    pick(flag, file)
        .or_else(|| {
            std::env::var("IGUSA_BUDGET")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(100_000_000)
}

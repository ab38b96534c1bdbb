//! Layered configuration: flag > ROMANKIT_* environment variable > config
//! file > default. The config file is plain `key = value` lines with `#`
//! comments; recognized keys are scheme, model, lm, backend_url,
//! backend_token, seed, jobs.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

#[derive(Debug, Default)]
pub struct Settings {
    pub scheme: Option<String>,
    pub model: Option<PathBuf>,
    pub lm: Option<PathBuf>,
    pub backend_url: Option<String>,
    pub backend_token: Option<String>,
    pub seed: u64,
    pub jobs: usize,
}

impl Settings {
    pub fn load(config: Option<&Path>, seed_flag: Option<u64>, jobs_flag: Option<usize>) -> Result<Self> {
        let path = config
            .map(Path::to_path_buf)
            .or_else(|| std::env::var("ROMANKIT_CONFIG").ok().map(PathBuf::from));
        let file = match &path {
            Some(p) => parse_file(
                &std::fs::read_to_string(p)
                    .with_context(|| format!("reading config {}", p.display()))?,
            )?,
            None => HashMap::new(),
        };
        let layered = |env_key: &str, file_key: &str| -> Option<String> {
            std::env::var(env_key).ok().or_else(|| file.get(file_key).cloned())
        };
        let seed = match seed_flag {
            Some(s) => s,
            None => layered("ROMANKIT_SEED", "seed")
                .map(|s| s.parse::<u64>().context("seed must be a 64-bit integer"))
                .transpose()?
                .unwrap_or(0),
        };
        let jobs = match jobs_flag {
            Some(j) => j,
            None => layered("ROMANKIT_JOBS", "jobs")
                .map(|s| s.parse::<usize>().context("jobs must be a positive integer"))
                .transpose()?
                .unwrap_or(1),
        };
        Ok(Self {
            scheme: layered("ROMANKIT_SCHEME", "scheme"),
            model: layered("ROMANKIT_MODEL", "model").map(PathBuf::from),
            lm: layered("ROMANKIT_LM", "lm").map(PathBuf::from),
            backend_url: layered("ROMANKIT_BACKEND_URL", "backend_url"),
            backend_token: layered("ROMANKIT_BACKEND_TOKEN", "backend_token"),
            seed,
            jobs: jobs.max(1),
        })
    }

    /// The effective seed, printed so runs are reproducible from their logs.
    pub fn seed_announced(&self) -> u64 {
        eprintln!("seed = {}", self.seed);
        self.seed
    }
}

fn parse_file(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("config line {}: expected `key = value`", idx + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

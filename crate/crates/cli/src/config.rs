//! Experiment configuration: `key = value` lines, `#` comments, lists as
//! comma-separated values.
//!
//! ```text
//! L = 20
//! method = lanczos
//! axis = Z
//! p_m = 0, 0.1, 0.5
//! L_A = 6:14        # inclusive range, or a list such as 4, 6, 8
//! window = 6:14
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use gsmi_core::{Axis, FitWindow, PurityAlgorithm, SolverMethod};

/// Invalid or inconsistent configuration. Maps to exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub len: usize,
    pub method: SolverMethod,
    pub axis: Axis,
    pub p_m: Vec<f64>,
    pub p_y: Option<Vec<f64>>,
    pub sizes: Vec<usize>,
    pub window: Option<FitWindow>,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub algorithm: Option<PurityAlgorithm>,
}

const KEYS: [&str; 11] = [
    "L", "method", "axis", "p_m", "p_y", "L_A", "window", "out", "cache_dir", "workers", "algorithm",
];

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T, ConfigError> {
    raw.trim()
        .parse()
        .or_else(|_| err(format!("{key}: cannot parse {:?}", raw.trim())))
}

fn parse_list<T: FromStr>(key: &str, raw: &str) -> Result<Vec<T>, ConfigError> {
    raw.split(',').map(|item| parse_value(key, item)).collect()
}

fn parse_probabilities(key: &str, raw: &str) -> Result<Vec<f64>, ConfigError> {
    let values: Vec<f64> = parse_list(key, raw)?;
    if values.is_empty() {
        return err(format!("{key}: empty list"));
    }
    if let Some(p) = values.iter().find(|p| !(0.0..=0.5).contains(*p)) {
        return err(format!("{key}: {p} outside [0, 1/2]"));
    }
    Ok(values)
}

/// `lo:hi` (inclusive) or a comma-separated list.
fn parse_sizes(raw: &str) -> Result<Vec<usize>, ConfigError> {
    if let Some((lo, hi)) = raw.split_once(':') {
        let lo: usize = parse_value("L_A", lo)?;
        let hi: usize = parse_value("L_A", hi)?;
        if lo > hi {
            return err(format!("L_A: empty range {lo}:{hi}"));
        }
        Ok((lo..=hi).collect())
    } else {
        parse_list("L_A", raw)
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(format!("line {}: expected `key = value`", n + 1));
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                return err(format!("line {}: unknown key {key:?}", n + 1));
            }
            if entries.iter().any(|(k, _)| k == key) {
                return err(format!("line {}: duplicate key {key:?}", n + 1));
            }
            entries.push((key.to_string(), value.trim().to_string()));
        }
        let get = |key: &str| entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());

        let len: usize = match get("L") {
            Some(v) => parse_value("L", v)?,
            None => return err("missing required key `L`"),
        };
        let method = match get("method") {
            Some(v) => parse_value("method", v)?,
            None => SolverMethod::Lanczos,
        };
        let axis = match get("axis") {
            Some(v) => parse_value("axis", v)?,
            None => Axis::Z,
        };
        let p_m = match get("p_m") {
            Some(v) => parse_probabilities("p_m", v)?,
            None => Vec::new(),
        };
        let p_y = get("p_y").map(|v| parse_probabilities("p_y", v)).transpose()?;
        let sizes = match get("L_A") {
            Some(v) => parse_sizes(v)?,
            None => (1..len.max(1)).collect(),
        };
        let window = get("window").map(|v| parse_value("window", v)).transpose()?;
        let workers = get("workers").map(|v| parse_value("workers", v)).transpose()?;
        let algorithm = get("algorithm").map(|v| parse_value("algorithm", v)).transpose()?;

        let config = Self {
            len,
            method,
            axis,
            p_m,
            p_y,
            sizes,
            window,
            out: get("out").map(PathBuf::from),
            cache_dir: get("cache_dir").map(PathBuf::from),
            workers,
            algorithm,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.len < 2 {
            return err(format!("L = {} is too small", self.len));
        }
        if let Some(&bad) = self.sizes.iter().find(|&&a| a == 0 || a >= self.len) {
            return err(format!("L_A = {bad} outside (0, {})", self.len));
        }
        if self.workers == Some(0) {
            return err("workers must be at least 1");
        }
        Ok(())
    }
}

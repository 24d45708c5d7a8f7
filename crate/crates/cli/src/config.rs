//! Run configuration: a flat key-value file merged under CLI flags.
//!
//! The file format is one `key = value` pair per line, `#` comments
//! allowed (and stripped even when the pair is inside the comment, so a
//! CSV header produced by a previous run can be fed straight back via
//! `--config`). JSON outputs embed the same pairs under a `"config"`
//! object, and the parser accepts those files too. Flags always win over
//! file values.

use anyhow::{bail, Context, Result};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Ok(Self::parse(&text))
    }

    pub fn parse(text: &str) -> Self {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            return Self::parse_json(trimmed);
        }
        let mut values = BTreeMap::new();
        for line in text.lines() {
            let line = line.trim().trim_start_matches('#').trim();
            if line.is_empty() {
                continue;
            }
            if let Some((key, value)) = line.split_once('=') {
                let key = key.trim();
                // reject lines that are clearly not config pairs (e.g. CSV
                // data that happens to contain '=')
                if key.is_empty() || key.contains(',') || key.contains(' ') {
                    continue;
                }
                values.insert(key.to_string(), value.trim().to_string());
            }
        }
        FileConfig { values }
    }

    fn parse_json(text: &str) -> Self {
        let mut values = BTreeMap::new();
        if let Ok(root) = serde_json::from_str::<serde_json::Value>(text) {
            if let Some(cfg) = root.get("config").and_then(|c| c.as_object()) {
                for (k, v) in cfg {
                    let s = match v {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    values.insert(k.clone(), s);
                }
            }
        }
        FileConfig { values }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }
}

/// Merge helper: flag value, else file value parsed from its string form,
/// else the built-in default.
pub fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    file: &FileConfig,
    key: &str,
    default: T,
) -> Result<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.get(key) {
        Some(raw) => raw
            .parse::<T>()
            .map_err(|_| anyhow::anyhow!("config key '{key}' has unparsable value '{raw}'")),
        None => Ok(default),
    }
}

/// As [`resolve`] but without a default: the value must come from
/// somewhere.
pub fn resolve_required<T: std::str::FromStr>(
    flag: Option<T>,
    file: &FileConfig,
    key: &str,
) -> Result<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.get(key) {
        Some(raw) => raw
            .parse::<T>()
            .map_err(|_| anyhow::anyhow!("config key '{key}' has unparsable value '{raw}'")),
        None => bail!("missing required parameter '{key}' (flag or config file)"),
    }
}

/// Comma-separated list of floats (for `--alpha` and friends).
pub fn parse_f64_list(raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| anyhow::anyhow!("bad float '{s}' in list '{raw}'"))
        })
        .collect()
}

pub fn parse_usize_list(raw: &str) -> Result<Vec<usize>> {
    raw.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| anyhow::anyhow!("bad integer '{s}' in list '{raw}'"))
        })
        .collect()
}

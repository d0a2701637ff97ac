//! Option resolution: command-line flag, then environment, then `--config`
//! file, then the built-in default.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use lrsearch::harness::doubling_range;
use lrsearch::{Error, Result};

/// Settings read from a `--config` file, keyed by flag name with `-` written
/// as `_`.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

fn norm(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('-', "_")
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    /// JSON object, or `key = value` lines with `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        if text.trim_start().starts_with('{') {
            let obj: serde_json::Map<String, serde_json::Value> = serde_json::from_str(text)?;
            for (k, v) in obj {
                values.insert(norm(&k), json_scalar(&v)?);
            }
        } else {
            for (i, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    Error::InvalidInput(format!("config line {}: expected key = value", i + 1))
                })?;
                values.insert(norm(k), v.trim().trim_matches('"').to_string());
            }
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

fn json_scalar(v: &serde_json::Value) -> Result<String> {
    use serde_json::Value;
    Ok(match v {
        Value::String(s) => s.clone(),
        Value::Number(x) => x.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Array(items) => items
            .iter()
            .map(json_scalar)
            .collect::<Result<Vec<_>>>()?
            .join(","),
        Value::Null | Value::Object(_) => {
            return Err(Error::InvalidInput(format!(
                "config value {v} is not a scalar or list"
            )))
        }
    })
}

/// Parses a scalar, naming the key on failure.
pub fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{key}: cannot parse {raw:?}")))
}

/// Comma-separated reals.
pub fn parse_reals(key: &str, raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_value(key, s))
        .collect()
}

/// Comma-separated sizes, or `lo..hi` for the doubling range `lo, 2lo, …, ≤ hi`.
pub fn parse_sizes(key: &str, raw: &str) -> Result<Vec<usize>> {
    if let Some((lo, hi)) = raw.split_once("..") {
        let r = doubling_range(parse_value(key, lo)?, parse_value(key, hi)?);
        if r.is_empty() {
            return Err(Error::InvalidInput(format!("{key}: empty range {raw:?}")));
        }
        return Ok(r);
    }
    raw.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_value(key, s))
        .collect()
}

/// Merges one option across its sources.
pub struct Resolver<'a> {
    pub file: &'a ConfigFile,
}

impl Resolver<'_> {
    fn raw(&self, key: &str, flag: Option<String>) -> Option<String> {
        flag.or_else(|| self.file.get(key).map(str::to_string))
    }

    pub fn opt<T: FromStr + ToString>(&self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        match self.raw(key, flag.map(|v| v.to_string())) {
            Some(r) => parse_value(key, &r).map(Some),
            None => Ok(None),
        }
    }

    pub fn or<T: FromStr + ToString>(&self, key: &str, flag: Option<T>, default: T) -> Result<T> {
        Ok(self.opt(key, flag)?.unwrap_or(default))
    }

    pub fn required<T: FromStr + ToString>(&self, key: &str, flag: Option<T>) -> Result<T> {
        self.opt(key, flag)?
            .ok_or_else(|| Error::InvalidInput(format!("--{} is required", key.replace('_', "-"))))
    }

    /// A boolean switch: set by the flag, or by `true`/`false` in the file.
    pub fn switch(&self, key: &str, flag: bool) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        self.file
            .get(key)
            .map_or(Ok(false), |r| parse_value(key, r))
    }

    pub fn reals(&self, key: &str, flag: Option<String>) -> Result<Option<Vec<f64>>> {
        self.raw(key, flag)
            .map(|r| parse_reals(key, &r))
            .transpose()
    }

    pub fn sizes(&self, key: &str, flag: Option<String>) -> Result<Option<Vec<usize>>> {
        self.raw(key, flag)
            .map(|r| parse_sizes(key, &r))
            .transpose()
    }

    /// Flag, then environment variable `env`, then file.
    pub fn with_env<T: FromStr + ToString>(
        &self,
        key: &str,
        flag: Option<T>,
        env: &str,
    ) -> Result<Option<T>> {
        if flag.is_some() {
            return self.opt(key, flag);
        }
        match std::env::var(env) {
            Ok(v) if !v.is_empty() => parse_value(env, &v).map(Some),
            _ => self.opt(key, None),
        }
    }
}

//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys may use `-` or
//! `_` interchangeably. Values from the file fill in options that were not
//! given on the command line.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Keys accepted in a configuration file.
pub const KNOWN_KEYS: &[&str] = &[
    "a",
    "a_max",
    "a_min",
    "alpha",
    "alpha_u",
    "b",
    "cache_dir",
    "checkpoints",
    "cutoff_c",
    "cutoff_wavenumber",
    "d",
    "extent",
    "format",
    "k",
    "lambda_p",
    "max_index",
    "max_order",
    "omega_p",
    "p",
    "points",
    "truncation",
    "y_p",
];

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!("config line {}: expected key = value", i + 1)));
            };
            let key = normalize(key);
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", i + 1)));
            }
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(CliError::Usage(format!("config line {}: duplicate key '{key}'", i + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("config key '{key}': cannot parse '{v}'")))
            })
            .transpose()
    }

    /// Command-line value if given, else the file value, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    /// Command-line value if given, else the file value.
    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

/// Comma-separated list of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| format!("bad list entry '{}'", t.trim())))
            .collect::<Result<Vec<T>, String>>()
            .map(List)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_layers() {
        let cfg = ConfigFile::parse("# defaults\nalpha = 1.5\ny-p=3.2\n\ncheckpoints = 10, 20").unwrap();
        assert_eq!(cfg.pick(None, "alpha", 1.0).unwrap(), 1.5);
        assert_eq!(cfg.pick(Some(2.0), "alpha", 1.0).unwrap(), 2.0);
        assert_eq!(cfg.pick(None, "k", 500usize).unwrap(), 500);
        assert_eq!(cfg.get::<f64>("y_p").unwrap(), Some(3.2));
        assert_eq!(cfg.get::<List<usize>>("checkpoints").unwrap(), Some(List(vec![10, 20])));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(ConfigFile::parse("alpha 1").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        assert!(ConfigFile::parse("k = 1\nk = 2").is_err());
        let cfg = ConfigFile::parse("k = many").unwrap();
        assert!(cfg.get::<usize>("k").is_err());
    }
}

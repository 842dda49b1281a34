//! `key = value` run configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys use the long
//! flag names; `-` and `_` are interchangeable. Values may be quoted.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "shape", "s", "n", "t", "threshold", "points", "format", "out", "overlay", "unsafe", "n_min",
    "n_max", "t_points", "s_max_scan",
];

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key = value, got '{line}'", lineno + 1);
            };
            let key = key.trim().replace('-', "_").to_ascii_lowercase();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!("line {}: unknown key '{key}'", lineno + 1);
            }
            let value = value.trim().trim_matches('"').to_string();
            entries.insert(key, value);
        }
        Ok(ConfigFile { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Parses `key` if present.
    pub fn parsed<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key '{key}': cannot parse '{v}': {e}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let cfg = ConfigFile::parse("# run\nshape = disk\nn-max=1e6\n\npoints = \"7\"\n").unwrap();
        assert_eq!(cfg.get("shape"), Some("disk"));
        assert_eq!(cfg.parsed::<f64>("n_max").unwrap(), Some(1e6));
        assert_eq!(cfg.parsed::<usize>("points").unwrap(), Some(7));
        assert_eq!(cfg.parsed::<usize>("t_points").unwrap(), None);
    }

    #[test]
    fn rejects_garbage() {
        assert!(ConfigFile::parse("shape disk").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        let cfg = ConfigFile::parse("points = many").unwrap();
        assert!(cfg.parsed::<usize>("points").is_err());
    }
}

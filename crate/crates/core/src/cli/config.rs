//! Flat key=value configuration files.
//!
//! Keys are the long flag names (without the leading dashes); values are
//! parsed exactly as the corresponding flag would be. Explicit flags
//! always override file values. Unknown keys are usage errors so typos
//! cannot silently change an analysis.

use std::collections::BTreeMap;
use std::path::Path;

/// Every key a configuration file may define: the union of the long
/// flags across subcommands.
pub const KNOWN_KEYS: &[&str] = &[
    "beta",
    "bias",
    "dataset",
    "gamma",
    "granularity",
    "lambda",
    "max",
    "method",
    "min",
    "n",
    "p",
    "points",
    "replicates",
    "rule",
    "sd-between",
    "sd-within",
    "seed",
    "series",
    "sigma",
    "stream",
    "workers",
];

/// Parsed configuration file; values stay raw strings until a subcommand
/// claims them.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    /// Loads and validates `path`. Errors are returned as plain messages
    /// for the caller to surface as usage failures.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config '{}': {e}", path.display()))?;
        Self::parse(&text)
    }

    fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                format!("config line {line_no}: expected key=value, got '{line}'")
            })?;
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(format!("config line {line_no}: unknown key '{key}'"));
            }
            if value.is_empty() {
                return Err(format!("config line {line_no}: key '{key}' has no value"));
            }
            if values.insert(key.to_string(), value.to_string()).is_some() {
                return Err(format!("config line {line_no}: duplicate key '{key}'"));
            }
        }
        Ok(FileConfig { values })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        debug_assert!(KNOWN_KEYS.contains(&key), "unregistered key '{key}'");
        self.values.get(key).map(String::as_str)
    }

    pub fn get_string(&self, key: &str) -> Option<String> {
        self.raw(key).map(str::to_string)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, String> {
        self.typed(key, "a real number")
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>, String> {
        self.typed(key, "a nonnegative integer")
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>, String> {
        self.typed(key, "a nonnegative integer")
    }

    fn typed<T: std::str::FromStr>(&self, key: &str, expected: &str) -> Result<Option<T>, String> {
        match self.raw(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| format!("config key '{key}' holds '{raw}', expected {expected}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_comments_and_blanks() {
        let cfg = FileConfig::parse(
            "# acceptance setup\n\
             rule = 4-6-15\n\
             gamma=0.90\n\
             \n\
             seed = 7\n",
        )
        .unwrap();
        assert_eq!(cfg.get_string("rule"), Some("4-6-15".into()));
        assert_eq!(cfg.get_f64("gamma").unwrap(), Some(0.90));
        assert_eq!(cfg.get_u64("seed").unwrap(), Some(7));
        assert_eq!(cfg.get_string("dataset"), None);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        let err = FileConfig::parse("rull = 4-6-15\n").unwrap_err();
        assert!(err.contains("unknown key 'rull'"), "{err}");

        let err = FileConfig::parse("seed = 1\nseed = 2\n").unwrap_err();
        assert!(err.contains("duplicate key 'seed'"), "{err}");

        let err = FileConfig::parse("just a line\n").unwrap_err();
        assert!(err.contains("expected key=value"), "{err}");

        let err = FileConfig::parse("seed =\n").unwrap_err();
        assert!(err.contains("no value"), "{err}");
    }

    #[test]
    fn typed_getters_report_bad_values() {
        let cfg = FileConfig::parse("seed = banana\n").unwrap();
        let err = cfg.get_u64("seed").unwrap_err();
        assert!(err.contains("'banana'"), "{err}");
    }
}

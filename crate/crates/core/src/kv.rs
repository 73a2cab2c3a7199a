//! Plain-text `key = value` configuration files.
//!
//! One entry per line, `#` starts a comment, blank lines are ignored. Keys
//! may appear once unless the consumer reads them with [`KeyValues::all`].

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    entries: Vec<(String, String, usize)>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got {line:?}", n + 1)))?;
            let key = k.trim();
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", n + 1)));
            }
            entries.push((key.to_string(), v.trim().to_string(), n + 1));
        }
        Ok(Self { entries })
    }

    /// The single value for `key`, if present.
    pub fn get(&self, key: &str) -> Result<Option<&str>> {
        let mut found = self.entries.iter().filter(|(k, _, _)| k == key);
        let first = found.next();
        if let Some((_, _, line)) = found.next() {
            return Err(Error::Config(format!("line {line}: duplicate key {key:?}")));
        }
        Ok(first.map(|(_, v, _)| v.as_str()))
    }

    /// Every value for `key`, in file order.
    pub fn all(&self, key: &str) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.as_str())
            .collect()
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)?
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::Config(format!("{key} = {v:?} is not valid")))
            })
            .transpose()
    }

    pub fn parsed_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    /// Fail on keys outside `allowed`.
    pub fn check_known(&self, allowed: &[&str]) -> Result<()> {
        match self.entries.iter().find(|(k, _, _)| !allowed.contains(&k.as_str())) {
            Some((k, _, line)) => Err(Error::Config(format!("line {line}: unknown key {k:?}"))),
            None => Ok(()),
        }
    }
}

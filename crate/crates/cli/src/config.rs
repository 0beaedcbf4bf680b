//! `key = value` experiment configuration.
//!
//! Values come from built-in defaults, then an optional config file, then
//! command-line flags, each layer overriding the previous one. Keys are
//! case-insensitive and `-` is read as `_`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use nalgebra::Vector3;

/// A parameter violates a precondition; maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationError(pub String);

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration: {}", self.0)
    }
}

impl std::error::Error for ValidationError {}

pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    ValidationError(msg.into()).into()
}

fn normalise(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut s = Self::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(invalid(format!("config line {}: expected `key = value`", no + 1)));
            };
            if k.trim().is_empty() {
                return Err(invalid(format!("config line {}: empty key", no + 1)));
            }
            s.set(k, v.trim());
        }
        Ok(s)
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.values.insert(normalise(key), value.to_string());
    }

    /// Parses a `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> anyhow::Result<()> {
        let (k, v) = pair.split_once('=').ok_or_else(|| invalid(format!("`{pair}` is not key=value")))?;
        self.set(k, v.trim());
        Ok(())
    }

    /// Overlays every entry of `other`.
    pub fn merge(&mut self, other: &Settings) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(&normalise(key)).map(String::as_str)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn f64_or(&self, key: &str, default: f64) -> anyhow::Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => parse_f64(key, v),
        }
    }

    pub fn opt_f64(&self, key: &str) -> anyhow::Result<Option<f64>> {
        self.raw(key).map(|v| parse_f64(key, v)).transpose()
    }

    pub fn usize_or(&self, key: &str, default: usize) -> anyhow::Result<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| invalid(format!("`{key}` = `{v}` is not a non-negative integer"))),
        }
    }

    pub fn string_or(&self, key: &str, default: &str) -> String {
        self.raw(key).unwrap_or(default).to_string()
    }

    /// Comma-separated list of numbers.
    pub fn list_or(&self, key: &str, default: &[f64]) -> anyhow::Result<Vec<f64>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(v) => v.split(',').map(|p| parse_f64(key, p.trim())).collect(),
        }
    }

    pub fn positive(&self, key: &str, default: f64) -> anyhow::Result<f64> {
        let v = self.f64_or(key, default)?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(invalid(format!("`{key}` = {v} must be positive")));
        }
        Ok(v)
    }

    /// Three comma-separated components, normalised to unit length.
    pub fn direction_or(&self, key: &str, default: Vector3<f64>) -> anyhow::Result<Vector3<f64>> {
        let v = match self.raw(key) {
            None => default,
            Some(_) => {
                let c = self.list_or(key, &[])?;
                if c.len() != 3 {
                    return Err(invalid(format!("`{key}` needs three components, got {}", c.len())));
                }
                Vector3::new(c[0], c[1], c[2])
            }
        };
        let n = v.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(invalid(format!("`{key}` must be a nonzero finite vector")));
        }
        Ok(v / n)
    }
}

fn parse_f64(key: &str, v: &str) -> anyhow::Result<f64> {
    let x: f64 = v.trim().parse().map_err(|_| invalid(format!("`{key}` = `{v}` is not a number")))?;
    if !x.is_finite() {
        return Err(invalid(format!("`{key}` = `{v}` is not finite")));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_normalises_keys() {
        let s = Settings::parse("# header\nDelta = 6 # wavelengths\nincident-dir=0,0,2\n\n").unwrap();
        assert_eq!(s.f64_or("delta", 1.0).unwrap(), 6.0);
        assert_eq!(s.direction_or("incident_dir", Vector3::x()).unwrap(), Vector3::z());
        assert_eq!(s.f64_or("sigma", 2.0).unwrap(), 2.0);
    }

    #[test]
    fn overrides_win() {
        let mut s = Settings::parse("n = 3\ns = 4").unwrap();
        let mut o = Settings::default();
        o.set_pair("n=7").unwrap();
        s.merge(&o);
        assert_eq!(s.usize_or("n", 0).unwrap(), 7);
        assert_eq!(s.usize_or("s", 0).unwrap(), 4);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Settings::parse("no equals sign").is_err());
        let s = Settings::parse("delta = -1\nn = 2.5\nx = abc\nd = 0,0,0").unwrap();
        let e = s.positive("delta", 1.0).unwrap_err();
        assert!(e.downcast_ref::<ValidationError>().unwrap().0.contains("delta"));
        assert!(s.usize_or("n", 1).is_err());
        assert!(s.f64_or("x", 1.0).is_err());
        assert!(s.direction_or("d", Vector3::x()).is_err());
    }
}

//! Run configuration: flat `key=value` files, command-line overrides and
//! validation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gf_core::FqField;
use local_ring::LocalParams;
use serde::{Deserialize, Serialize};

pub const MAX_BALL: u32 = 4;
pub const DEFAULT_BALL: u32 = 4;
pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_MAX_CUTOFF: u32 = 2;
pub const DEFAULT_SEED: u64 = 20240611;
pub const DEFAULT_MEMORY_BUDGET_MB: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("unknown check `{0}` (see `verify list`)")]
    UnknownCheck(String),
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// A validated configuration. `checks` is `"all"` or a comma-separated list
/// of check ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u32,
    pub e: u32,
    pub f: u32,
    pub prec: u32,
    pub ball: u32,
    pub max_cutoff: u32,
    pub seed: u64,
    pub checks: String,
    pub samples: usize,
    pub checked: bool,
    pub memory_budget_mb: u64,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

/// Unvalidated settings; later layers override earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawConfig {
    pub p: Option<u32>,
    pub e: Option<u32>,
    pub f: Option<u32>,
    pub prec: Option<u32>,
    pub ball: Option<u32>,
    pub max_cutoff: Option<u32>,
    pub seed: Option<u64>,
    pub checks: Option<String>,
    pub samples: Option<usize>,
    pub checked: Option<bool>,
    pub memory_budget_mb: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

impl RawConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key.trim() {
            "p" => self.p = Some(parse_value(key, value)?),
            "e" => self.e = Some(parse_value(key, value)?),
            "f" => self.f = Some(parse_value(key, value)?),
            "prec" => self.prec = Some(parse_value(key, value)?),
            "ball" => self.ball = Some(parse_value(key, value)?),
            "max_cutoff" => self.max_cutoff = Some(parse_value(key, value)?),
            "seed" => self.seed = Some(parse_value(key, value)?),
            "checks" => self.checks = Some(value.to_string()),
            "samples" => self.samples = Some(parse_value(key, value)?),
            "checked" => self.checked = Some(parse_value(key, value)?),
            "memory_budget_mb" => self.memory_budget_mb = Some(parse_value(key, value)?),
            "output" => self.output = Some(PathBuf::from(value)),
            "format" => {
                self.format = Some(match value {
                    "json" => Format::Json,
                    "text" => Format::Text,
                    _ => {
                        return Err(ConfigError::BadValue {
                            key: key.to_string(),
                            value: value.to_string(),
                            reason: "expected json or text".into(),
                        })
                    }
                })
            }
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line: i + 1, message: format!("expected key=value, got `{line}`") })?;
            raw.set(key, value)?;
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Self::parse(&text)
    }

    /// `other`'s settings win.
    pub fn merge(self, other: RawConfig) -> RawConfig {
        RawConfig {
            p: other.p.or(self.p),
            e: other.e.or(self.e),
            f: other.f.or(self.f),
            prec: other.prec.or(self.prec),
            ball: other.ball.or(self.ball),
            max_cutoff: other.max_cutoff.or(self.max_cutoff),
            seed: other.seed.or(self.seed),
            checks: other.checks.or(self.checks),
            samples: other.samples.or(self.samples),
            checked: other.checked.or(self.checked),
            memory_budget_mb: other.memory_budget_mb.or(self.memory_budget_mb),
            output: other.output.or(self.output),
            format: other.format.or(self.format),
        }
    }

    pub fn resolve(self) -> Result<RunConfig, ConfigError> {
        let ball = self.ball.unwrap_or(DEFAULT_BALL);
        let config = RunConfig {
            p: self.p.ok_or(ConfigError::Missing("p"))?,
            e: self.e.ok_or(ConfigError::Missing("e"))?,
            f: self.f.ok_or(ConfigError::Missing("f"))?,
            prec: self.prec.unwrap_or(2 * ball + 1),
            ball,
            max_cutoff: self.max_cutoff.unwrap_or(DEFAULT_MAX_CUTOFF),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            checks: self.checks.unwrap_or_else(|| "all".to_string()),
            samples: self.samples.unwrap_or(DEFAULT_SAMPLES),
            checked: self.checked.unwrap_or(true),
            memory_budget_mb: self.memory_budget_mb.unwrap_or(DEFAULT_MEMORY_BUDGET_MB),
            output: self.output,
            format: self.format.unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }
}

impl RunConfig {
    /// Defaults for the model `(p, e, f)`.
    pub fn new(p: u32, e: u32, f: u32) -> Result<Self, ConfigError> {
        RawConfig { p: Some(p), e: Some(e), f: Some(f), ..RawConfig::default() }.resolve()
    }

    pub fn with_ball(mut self, ball: u32) -> Result<Self, ConfigError> {
        self.ball = ball;
        self.prec = self.prec.max(2 * ball + 1);
        self.validate()?;
        Ok(self)
    }

    pub fn with_checks(mut self, checks: &[&str]) -> Self {
        self.checks = if checks.is_empty() { String::new() } else { checks.join(",") };
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.f)
    }

    /// `None` for every check, otherwise the listed ids in order.
    pub fn selection(&self) -> Option<Vec<String>> {
        let trimmed = self.checks.trim();
        if trimmed == "all" {
            return None;
        }
        Some(trimmed.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.e == 0 || self.f == 0 {
            return Err(ConfigError::Invalid("e and f must be at least 1".into()));
        }
        FqField::new(self.p, self.f).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        LocalParams::new(self.p, self.e, self.f, self.prec).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.ball == 0 || self.ball > MAX_BALL {
            return Err(ConfigError::Invalid(format!("ball radius must lie in 1..={MAX_BALL}, got {}", self.ball)));
        }
        if self.prec <= self.ball {
            return Err(ConfigError::Invalid(format!(
                "precision {} cannot resolve a ball of radius {}",
                self.prec, self.ball
            )));
        }
        if self.samples == 0 {
            return Err(ConfigError::Invalid("samples must be positive".into()));
        }
        Ok(())
    }

    /// Rough peak memory of a run: coset tables and sparse elimination
    /// rows, linear in the number of edges of the ball.
    pub fn estimated_bytes(&self) -> u64 {
        let q = u64::from(self.q());
        let edges = 2 * (q + 1) * q.pow(self.ball);
        edges.saturating_mul(q).saturating_mul(2048)
    }

    pub fn over_budget(&self) -> bool {
        self.estimated_bytes() > self.memory_budget_mb.saturating_mul(1 << 20)
    }

    /// The `key=value` form read back by [`RawConfig::parse`].
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p={}\ne={}\nf={}\nprec={}\nball={}", self.p, self.e, self.f, self.prec, self.ball);
        let _ = writeln!(out, "max_cutoff={}\nseed={}\nchecks={}", self.max_cutoff, self.seed, self.checks);
        let _ = writeln!(out, "samples={}\nchecked={}\nmemory_budget_mb={}", self.samples, self.checked, self.memory_budget_mb);
        if let Some(path) = &self.output {
            let _ = writeln!(out, "output={}", path.display());
        }
        let _ = writeln!(out, "format={}", if self.format == Format::Json { "json" } else { "text" });
        out
    }
}

/// `(p, e, f, ball)` of the built-in grid.
pub const DEFAULT_GRID: &[(u32, u32, u32, u32)] =
    &[(2, 1, 2, 4), (3, 2, 1, 4), (5, 2, 1, 4), (2, 2, 1, 4), (2, 1, 3, 2), (3, 1, 2, 2)];

pub fn grid(name: &str, base: &RunConfig) -> Result<Vec<RunConfig>, ConfigError> {
    if name != "default" {
        return Err(ConfigError::Invalid(format!("unknown grid `{name}`")));
    }
    DEFAULT_GRID
        .iter()
        .map(|&(p, e, f, ball)| {
            let config = RunConfig { p, e, f, ball, prec: 2 * ball + 1, ..base.clone() };
            config.validate()?;
            Ok(config)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let raw = RawConfig::parse("p = 2\ne=1 # unramified\nf=2\n\nchecks=a,b\n").unwrap();
        let config = raw.clone().merge(RawConfig { ball: Some(2), ..RawConfig::default() }).resolve().unwrap();
        assert_eq!((config.q(), config.ball, config.prec), (4, 2, 5));
        assert_eq!(config.selection(), Some(vec!["a".to_string(), "b".to_string()]));
        assert_eq!(raw.resolve().unwrap().ball, DEFAULT_BALL);
    }

    #[test]
    fn rejects_bad_models() {
        let bad = |text: &str| RawConfig::parse(text).and_then(RawConfig::resolve).unwrap_err();
        assert!(matches!(bad("p=4\ne=1\nf=1"), ConfigError::Invalid(_)));
        assert!(matches!(bad("p=3\ne=1\nf=5"), ConfigError::Invalid(_)));
        assert!(matches!(bad("p=2\ne=0\nf=2"), ConfigError::Invalid(_)));
        assert!(matches!(bad("p=2\ne=1\nf=2\nball=5"), ConfigError::Invalid(_)));
        assert!(matches!(bad("p=2\ne=1"), ConfigError::Missing("f")));
        assert!(matches!(bad("p=2\nzeta=1"), ConfigError::UnknownKey(_)));
        assert!(matches!(bad("p 2"), ConfigError::Syntax { line: 1, .. }));
        assert!(matches!(bad("p=two"), ConfigError::BadValue { .. }));
    }

    #[test]
    fn budget_estimate_separates_large_balls() {
        assert!(!RunConfig::new(3, 1, 2).unwrap().over_budget());
        assert!(RunConfig::new(3, 1, 4).unwrap().with_ball(3).unwrap().over_budget());
    }

    #[test]
    fn default_grid_is_valid() {
        let base = RunConfig::new(2, 1, 2).unwrap();
        assert_eq!(grid("default", &base).unwrap().len(), DEFAULT_GRID.len());
        assert!(grid("huge", &base).is_err());
    }
}

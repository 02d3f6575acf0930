//! Flat `key = value` scenario files.
//!
//! ```text
//! # canonical scenario
//! m  = 1
//! V0 = 2
//! l  = 1.4049629462081452
//! k0 = 3
//! a  = 8
//! x0 = -15
//! times = 0, 5, 8, 12
//! ```
//!
//! The six physics keys are required. Numerical keys fall back to the defaults
//! of [`Scenario::with_physics`]; [`render`] writes every key, so a rendered
//! file reloads to the same run.

use std::collections::BTreeMap;
use std::path::PathBuf;

use barrierlab_core::{Scenario, Source};
use thiserror::Error;

use crate::source::{parse_source, source_spec};

pub const PHYSICS_KEYS: [&str; 6] = ["m", "V0", "l", "k0", "a", "x0"];

pub const NUMERICAL_KEYS: [&str; 14] = [
    "xmin",
    "xmax",
    "dx",
    "dt",
    "quad_nodes",
    "quad_half_width",
    "times",
    "series_terms",
    "sweep_points",
    "sweep_k_max",
    "peak_threshold",
    "cn_start",
    "out_dir",
    "source",
];

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("key `{key}`: cannot parse `{value}`")]
    BadValue { key: String, value: String },
}

/// A scenario plus the I/O settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub out_dir: PathBuf,
    /// Packet source for `evolve`.
    pub source: Source,
}

impl RunConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            out_dir: PathBuf::from("out"),
            source: Source::ClosedForm,
        }
    }
}

fn bad(key: &str, value: &str) -> ConfigError {
    ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
    }
}

fn number(key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| bad(key, value))
}

fn count(key: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse().map_err(|_| bad(key, value))
}

pub fn parse_times(value: &str) -> Option<Vec<f64>> {
    value
        .split(',')
        .map(|t| t.trim().parse::<f64>().ok().filter(|t| t.is_finite()))
        .collect()
}

pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
    let mut entries: BTreeMap<&str, &str> = BTreeMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            text: content.to_string(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !PHYSICS_KEYS.contains(&key) && !NUMERICAL_KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        }
        if entries.insert(key, value).is_some() {
            return Err(ConfigError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
    }

    let physics = |key: &'static str| -> Result<f64, ConfigError> {
        let value = entries.get(key).ok_or(ConfigError::Missing(key))?;
        number(key, value)
    };
    let scenario = Scenario::with_physics(
        physics("m")?,
        physics("V0")?,
        physics("l")?,
        physics("k0")?,
        physics("a")?,
        physics("x0")?,
    );
    let mut config = RunConfig::new(scenario);
    let s = &mut config.scenario;
    for (&key, &value) in &entries {
        match key {
            "xmin" => s.xmin = number(key, value)?,
            "xmax" => s.xmax = number(key, value)?,
            "dx" => s.dx = number(key, value)?,
            "dt" if value == "auto" => s.dt = None,
            "dt" => s.dt = Some(number(key, value)?),
            "quad_nodes" => s.quad_nodes = count(key, value)?,
            "quad_half_width" => s.quad_half_width = number(key, value)?,
            "times" => s.times = parse_times(value).ok_or_else(|| bad(key, value))?,
            "series_terms" => s.series_terms = count(key, value)?,
            "sweep_points" => s.sweep_points = count(key, value)?,
            "sweep_k_max" => s.sweep_k_max = number(key, value)?,
            "peak_threshold" => s.peak_threshold = number(key, value)?,
            "cn_start" => {
                s.cn_start = match value {
                    "closed" => Source::ClosedForm,
                    "incoming" => Source::IncomingOnly,
                    _ => return Err(bad(key, value)),
                }
            }
            "out_dir" => config.out_dir = PathBuf::from(value),
            "source" => config.source = parse_source(value, s.series_terms).ok_or_else(|| bad(key, value))?,
            _ => {}
        }
    }
    Ok(config)
}

fn join_times(times: &[f64]) -> String {
    times.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

/// Every key with its resolved value. Floats use the shortest representation
/// that parses back to the same value.
pub fn render(config: &RunConfig) -> String {
    let s = &config.scenario;
    let dt = s.dt.map_or_else(|| "auto".to_string(), |dt| dt.to_string());
    let cn_start = if s.cn_start == Source::IncomingOnly { "incoming" } else { "closed" };
    let lines = [
        ("m", s.mass.to_string()),
        ("V0", s.height.to_string()),
        ("l", s.length.to_string()),
        ("k0", s.k0.to_string()),
        ("a", s.a.to_string()),
        ("x0", s.x0.to_string()),
        ("xmin", s.xmin.to_string()),
        ("xmax", s.xmax.to_string()),
        ("dx", s.dx.to_string()),
        ("dt", dt),
        ("quad_nodes", s.quad_nodes.to_string()),
        ("quad_half_width", s.quad_half_width.to_string()),
        ("times", join_times(&s.times)),
        ("series_terms", s.series_terms.to_string()),
        ("sweep_points", s.sweep_points.to_string()),
        ("sweep_k_max", s.sweep_k_max.to_string()),
        ("peak_threshold", s.peak_threshold.to_string()),
        ("cn_start", cn_start.to_string()),
        ("out_dir", config.out_dir.display().to_string()),
        ("source", source_spec(config.source)),
    ];
    lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

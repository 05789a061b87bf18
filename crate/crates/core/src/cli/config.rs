//! Flat `key = value` configuration with `#` comments.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::algebra::{is_prime, Pair, DEFAULT_CAP};
use crate::solver::ScenarioKind;
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    Angle,
    Heisenberg,
    Enumerate,
    Relations,
    Solve,
    FhCheck,
    Flatness,
    Verify,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Angle,
        Command::Heisenberg,
        Command::Enumerate,
        Command::Relations,
        Command::Solve,
        Command::FhCheck,
        Command::Flatness,
        Command::Verify,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Angle => "angle",
            Command::Heisenberg => "heisenberg",
            Command::Enumerate => "enumerate",
            Command::Relations => "relations",
            Command::Solve => "solve",
            Command::FhCheck => "fh-check",
            Command::Flatness => "flatness",
            Command::Verify => "verify",
        }
    }

    /// Keys without a default that the command needs.
    pub fn required_keys(self) -> &'static [&'static str] {
        match self {
            Command::Angle | Command::Enumerate | Command::Relations => &["p", "n", "k"],
            Command::Heisenberg => &["p"],
            Command::Solve => &["scenario"],
            Command::FhCheck | Command::Flatness => &[],
            Command::Verify => &["suite"],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Euclidean,
    Hyperboloid,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Euclidean => "euclidean",
            ModelKind::Hyperboloid => "hyperboloid",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Relations,
    Geometry,
    Monitors,
    All,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Geometry => "geometry",
            Suite::Monitors => "monitors",
            Suite::All => "all",
        }
    }
}

/// Where a value came from, for error messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Line(usize),
    Flag,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub source: Source,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub source: Option<Source>,
    pub key: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn at(entry: &Entry, message: impl Into<String>) -> Self {
        Self {
            source: Some(entry.source),
            key: Some(entry.key.clone()),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self {
            source: None,
            key: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.source, &self.key) {
            (Some(Source::Line(l)), Some(k)) => write!(f, "line {l}, key {k}: {}", self.message),
            (Some(Source::Line(l)), None) => write!(f, "line {l}: {}", self.message),
            (Some(Source::Flag), Some(k)) => write!(f, "flag --{}: {}", k.replace('_', "-"), self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

pub const KEYS: [&str; 22] = [
    "cap",
    "curvature",
    "D",
    "dim",
    "k",
    "max_iter",
    "mirror_angle",
    "model",
    "n",
    "offset",
    "out",
    "p",
    "pair",
    "samples",
    "scales",
    "scenario",
    "seed",
    "spread",
    "subgroup",
    "suite",
    "tol",
    "trials",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Prime `2 <= p <= 101`.
    pub p: Option<u32>,
    /// Matrix size `2 <= n <= 8`.
    pub n: Option<usize>,
    /// Number of ring variables, `0 <= k <= 4`.
    pub k: Option<usize>,
    /// Truncation degree `1 <= D <= 32`; defaults to `n`.
    pub max_degree: Option<usize>,
    /// BFS cap, `1 <= cap <= 10^7`; default 20000.
    pub cap: usize,
    pub pair: Option<Pair>,
    /// Generating subgroup `1..=3` for `enumerate`.
    pub subgroup: Option<usize>,
    pub scenario: Option<ScenarioKind>,
    pub model: ModelKind,
    /// Model dimension `1 <= dim <= 512`; default 2.
    pub dim: usize,
    /// Curvature scale `c > 0`; default 1.
    pub curvature: f64,
    /// `tol` sets the fixed-point energy threshold, `0 < tol < 1`.
    pub tol: Tolerances,
    /// `1 <= max_iter <= 10^7`; default 20000.
    pub max_iter: usize,
    /// Dihedral angle of the mirrors scenario in degrees, in `(0, 180)`.
    pub mirror_angle: f64,
    pub offset: f64,
    pub spread: f64,
    /// `1 <= trials <= 10^6`; default 1000.
    pub trials: usize,
    /// Positive scales; default `1,2,4,8`.
    pub scales: Vec<f64>,
    pub suite: Option<Suite>,
    /// Sampled points per monitored scenario, `1 <= samples <= 10^6`; default 1000.
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            out: None,
            p: None,
            n: None,
            k: None,
            max_degree: None,
            cap: DEFAULT_CAP,
            pair: None,
            subgroup: None,
            scenario: None,
            model: ModelKind::Euclidean,
            dim: 2,
            curvature: 1.0,
            tol: Tolerances::DEFAULT,
            max_iter: 20_000,
            mirror_angle: 70.0,
            offset: 1.0,
            spread: 2.0,
            trials: 1000,
            scales: vec![1.0, 2.0, 4.0, 8.0],
            suite: None,
            samples: 1000,
        }
    }
}

/// Split `text` into entries. Blank lines and `#` comments are skipped.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let source = Source::Line(i + 1);
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError {
            source: Some(source),
            key: None,
            message: format!("expected `key = value`, got {line:?}"),
        })?;
        let entry = Entry {
            key: key.trim().to_string(),
            value: value.trim().to_string(),
            source,
        };
        if entries.iter().any(|e| e.key == entry.key) {
            return Err(ConfigError::at(&entry, "duplicate key"));
        }
        entries.push(entry);
    }
    Ok(entries)
}

fn required_listing() -> String {
    Command::ALL
        .iter()
        .map(|c| {
            let keys = c.required_keys();
            if keys.is_empty() {
                format!("{c}: none")
            } else {
                format!("{c}: {}", keys.join(", "))
            }
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Parse a configuration file on its own.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let entries = parse_entries(text)?;
    if entries.is_empty() {
        return Err(ConfigError::general(format!(
            "configuration is empty; required keys per command: {}",
            required_listing()
        )));
    }
    build_config(&entries)
}

fn parse_num<T: FromStr>(e: &Entry) -> Result<T, ConfigError> {
    e.value
        .parse()
        .map_err(|_| ConfigError::at(e, format!("malformed value {:?}", e.value)))
}

fn in_range<T: PartialOrd + fmt::Display + Copy>(e: &Entry, v: T, lo: T, hi: T) -> Result<T, ConfigError> {
    if v < lo || v > hi {
        return Err(ConfigError::at(e, format!("{v} is outside [{lo}, {hi}]")));
    }
    Ok(v)
}

fn positive(e: &Entry) -> Result<f64, ConfigError> {
    let v: f64 = parse_num(e)?;
    if !(v.is_finite() && v > 0.0) {
        return Err(ConfigError::at(e, format!("{v} must be positive and finite")));
    }
    Ok(v)
}

/// Validate entries in order; later entries override earlier ones.
pub fn build_config(entries: &[Entry]) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    for e in entries {
        match e.key.as_str() {
            "seed" => cfg.seed = parse_num(e)?,
            "out" => {
                if e.value.is_empty() {
                    return Err(ConfigError::at(e, "empty path"));
                }
                cfg.out = Some(PathBuf::from(&e.value));
            }
            "p" => {
                let p: u32 = parse_num(e)?;
                if !is_prime(p) {
                    return Err(ConfigError::at(e, format!("{p} is not prime")));
                }
                cfg.p = Some(in_range(e, p, 2, 101)?);
            }
            "n" => cfg.n = Some(in_range(e, parse_num(e)?, 2, 8)?),
            "k" => cfg.k = Some(in_range(e, parse_num(e)?, 0, 4)?),
            "D" => cfg.max_degree = Some(in_range(e, parse_num(e)?, 1, 32)?),
            "cap" => cfg.cap = in_range(e, parse_num(e)?, 1, 10_000_000)?,
            "pair" => cfg.pair = Some(e.value.parse().map_err(|err| ConfigError::at(e, format!("{err}")))?),
            "subgroup" => cfg.subgroup = Some(in_range(e, parse_num(e)?, 1, 3)?),
            "scenario" => {
                let kind: ScenarioKind = e.value.parse().map_err(|err| ConfigError::at(e, format!("{err}")))?;
                cfg.scenario = Some(kind);
            }
            "model" => {
                cfg.model = match e.value.as_str() {
                    "euclidean" => ModelKind::Euclidean,
                    "hyperboloid" => ModelKind::Hyperboloid,
                    other => {
                        return Err(ConfigError::at(e, format!("expected euclidean or hyperboloid, got {other:?}")));
                    }
                }
            }
            "dim" => cfg.dim = in_range(e, parse_num(e)?, 1, 512)?,
            "curvature" => cfg.curvature = positive(e)?,
            "tol" => {
                let t = positive(e)?;
                if t >= 1.0 {
                    return Err(ConfigError::at(e, format!("{t} must be below 1")));
                }
                cfg.tol.fixed_energy = t;
            }
            "max_iter" => cfg.max_iter = in_range(e, parse_num(e)?, 1, 10_000_000)?,
            "mirror_angle" => {
                let a = positive(e)?;
                if a >= 180.0 {
                    return Err(ConfigError::at(e, format!("{a} must be below 180")));
                }
                cfg.mirror_angle = a;
            }
            "offset" => {
                let v: f64 = parse_num(e)?;
                if !(v.is_finite() && v >= 0.0) {
                    return Err(ConfigError::at(e, format!("{v} must be nonnegative and finite")));
                }
                cfg.offset = v;
            }
            "spread" => cfg.spread = positive(e)?,
            "trials" => cfg.trials = in_range(e, parse_num(e)?, 1, 1_000_000)?,
            "samples" => cfg.samples = in_range(e, parse_num(e)?, 1, 1_000_000)?,
            "scales" => {
                let mut scales = Vec::new();
                for part in e.value.split(',') {
                    let v: f64 = part
                        .trim()
                        .parse()
                        .map_err(|_| ConfigError::at(e, format!("malformed scale {part:?}")))?;
                    if !(v.is_finite() && v > 0.0) {
                        return Err(ConfigError::at(e, format!("scale {v} must be positive and finite")));
                    }
                    scales.push(v);
                }
                cfg.scales = scales;
            }
            "suite" => {
                cfg.suite = Some(match e.value.as_str() {
                    "relations" => Suite::Relations,
                    "geometry" => Suite::Geometry,
                    "monitors" => Suite::Monitors,
                    "all" => Suite::All,
                    other => {
                        return Err(ConfigError::at(
                            e,
                            format!("expected relations, geometry, monitors or all, got {other:?}"),
                        ));
                    }
                })
            }
            _ => return Err(ConfigError::at(e, format!("unknown key; known keys: {}", KEYS.join(", ")))),
        }
    }
    if cfg.max_degree.is_none() {
        cfg.max_degree = cfg.n;
    }
    Ok(cfg)
}

impl RunConfig {
    /// Check that `command` has everything it needs.
    pub fn require(&self, command: Command) -> Result<(), ConfigError> {
        let mut missing: Vec<&str> = Vec::new();
        let mut need = command.required_keys().to_vec();
        if command == Command::Verify && matches!(self.suite, Some(Suite::Relations | Suite::All)) {
            need.extend(["p", "n", "k"]);
        }
        for key in need {
            let present = match key {
                "p" => self.p.is_some(),
                "n" => self.n.is_some(),
                "k" => self.k.is_some(),
                "scenario" => self.scenario.is_some(),
                "suite" => self.suite.is_some(),
                _ => true,
            };
            if !present {
                missing.push(key);
            }
        }
        if !missing.is_empty() {
            return Err(ConfigError::general(format!(
                "{command} is missing required key(s): {}",
                missing.join(", ")
            )));
        }
        if command == Command::Enumerate && self.pair.is_some() && self.subgroup.is_some() {
            return Err(ConfigError::general("enumerate takes either pair or subgroup, not both"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let cfg = parse_config("p = 5\nn = 3\nk = 1").unwrap();
        assert_eq!(cfg.max_degree, Some(3));
        assert_eq!(cfg.cap, 20_000);
        assert_eq!(cfg.seed, 0);
    }

    #[test]
    fn rejects_bad_input() {
        let e = parse_config("p = 4").unwrap_err();
        assert_eq!(e.key.as_deref(), Some("p"));
        assert!(e.to_string().starts_with("line 1, key p"));
        let e = parse_config("# comment\n\nwidth = 3").unwrap_err();
        assert_eq!(e.source, Some(Source::Line(3)));
        assert!(e.message.contains("unknown key"));
        let e = parse_config("").unwrap_err();
        assert!(e.message.contains("angle: p, n, k"));
        assert!(e.message.contains("heisenberg: p"));
        assert!(parse_config("p = 5\np = 7").is_err());
        assert!(parse_config("n = 3 4").is_err());
        assert!(parse_config("just words").is_err());
        assert!(parse_config("n = 40").is_err());
        assert!(parse_config("scales = 1,-2").is_err());
    }

    #[test]
    fn comments_and_overrides() {
        let mut entries = parse_entries("p = 5 # the prime\nscales = 1, 2").unwrap();
        entries.push(Entry {
            key: "p".into(),
            value: "7".into(),
            source: Source::Flag,
        });
        let cfg = build_config(&entries).unwrap();
        assert_eq!(cfg.p, Some(7));
        assert_eq!(cfg.scales, vec![1.0, 2.0]);
    }

    #[test]
    fn required_keys() {
        let cfg = parse_config("p = 5").unwrap();
        assert!(cfg.require(Command::Heisenberg).is_ok());
        let e = cfg.require(Command::Angle).unwrap_err();
        assert!(e.message.contains("n, k"));
        assert!(cfg.require(Command::Solve).is_err());
    }
}

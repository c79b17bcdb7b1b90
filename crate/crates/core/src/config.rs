//! Flat `key=value` run configuration.
//!
//! A file is parsed into a [`ConfigLayer`]; layers are applied in order on
//! top of [`Config::default`], so command-line flags (the last layer)
//! override file values.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::integrators::Method;
use crate::model::Scheme;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, found '{text}'")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key '{key}' given twice")]
    DuplicateKey { line: usize, key: &'static str },
    #[error("line {line}: {key}: {message}")]
    InvalidValue {
        line: usize,
        key: &'static str,
        message: String,
    },
    #[error("tau and CFL are mutually exclusive")]
    TauAndCfl,
    #[error("{0}")]
    Invalid(String),
}

/// Every recognised key, in documentation order.
pub const KEYS: [&str; 17] = [
    "scheme",
    "problem",
    "K",
    "L",
    "tau",
    "CFL",
    "T",
    "sample_every",
    "s_norm",
    "B",
    "C",
    "dealias",
    "coupled",
    "out_dir",
    "taus",
    "times",
    "init_file",
];

/// One or both trigonometric schemes, or the RK4 oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeChoice {
    Single(Method),
    Both,
}

impl SchemeChoice {
    pub fn methods(self) -> Vec<Method> {
        match self {
            SchemeChoice::Single(m) => vec![m],
            SchemeChoice::Both => vec![
                Method::Trig(Scheme::FirstOrder),
                Method::Trig(Scheme::SecondOrder),
            ],
        }
    }
}

impl FromStr for SchemeChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "both" => Ok(SchemeChoice::Both),
            other => other
                .parse::<Method>()
                .map(SchemeChoice::Single)
                .map_err(|_| format!("expected first, second, both or rk4, found '{other}'")),
        }
    }
}

impl fmt::Display for SchemeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeChoice::Single(m) => write!(f, "{m}"),
            SchemeChoice::Both => f.write_str("both"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Example1,
    Soliton,
    Custom,
}

impl FromStr for ProblemKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "example1" => Ok(ProblemKind::Example1),
            "soliton" => Ok(ProblemKind::Soliton),
            "custom" => Ok(ProblemKind::Custom),
            other => Err(format!("expected example1, soliton or custom, found '{other}'")),
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Example1 => "example1",
            ProblemKind::Soliton => "soliton",
            ProblemKind::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Tau(f64),
    Cfl(f64),
}

pub const DEFAULT_EXAMPLE1_MODES: usize = 1024;
pub const DEFAULT_SOLITON_MODES: usize = 512;
pub const DEFAULT_SOLITON_LENGTH: f64 = 20.0 * std::f64::consts::PI;
pub const DEFAULT_EXAMPLE1_LENGTH: f64 = 2.0 * std::f64::consts::PI;
pub const DEFAULT_CFL: f64 = 5.0;
pub const DEFAULT_T: f64 = 1.0;
pub const DEFAULT_B: f64 = 0.5;
pub const DEFAULT_C: f64 = 0.15;
pub const DEFAULT_TAUS: [f64; 4] = [4e-3, 2e-3, 1e-3, 5e-4];

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub scheme: SchemeChoice,
    pub problem: ProblemKind,
    /// `None` means the problem's default.
    pub modes: Option<usize>,
    pub length: Option<f64>,
    pub step: Step,
    pub t_end: f64,
    pub sample_every: u64,
    pub s_norm: f64,
    pub b: f64,
    pub c: f64,
    pub dealias: bool,
    pub coupled: bool,
    pub out_dir: Option<PathBuf>,
    pub taus: Vec<f64>,
    /// Snapshot times; `None` means `0, T/2, T`.
    pub times: Option<Vec<f64>>,
    pub init_file: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            scheme: SchemeChoice::Both,
            problem: ProblemKind::Soliton,
            modes: None,
            length: None,
            step: Step::Cfl(DEFAULT_CFL),
            t_end: DEFAULT_T,
            sample_every: 1,
            s_norm: 0.0,
            b: DEFAULT_B,
            c: DEFAULT_C,
            dealias: false,
            coupled: true,
            out_dir: None,
            taus: DEFAULT_TAUS.to_vec(),
            times: None,
            init_file: None,
        }
    }
}

/// Parsed but not yet applied `key=value` pairs, with their line numbers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    entries: Vec<(usize, &'static str, String)>,
}

fn known(key: &str) -> Option<&'static str> {
    KEYS.iter().copied().find(|k| *k == key)
}

impl ConfigLayer {
    /// Builds a layer from pairs that did not come from a file, such as flags.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, String)>) -> Result<Self, ConfigError> {
        let mut layer = ConfigLayer::default();
        for (i, (key, value)) in pairs.into_iter().enumerate() {
            layer.push(i + 1, key, value)?;
        }
        Ok(layer)
    }

    fn push(&mut self, line: usize, key: &str, value: String) -> Result<(), ConfigError> {
        let Some(key) = known(key) else {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if self.entries.iter().any(|(_, k, _)| *k == key) {
            return Err(ConfigError::DuplicateKey { line, key });
        }
        self.entries.push((line, key, value));
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(_, k, _)| *k == key).map(|(_, _, v)| v.as_str())
    }
}

/// Parses a config file. Blank lines and lines starting with `#` are skipped.
pub fn parse_config(text: &str) -> Result<ConfigLayer, ConfigError> {
    let mut layer = ConfigLayer::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: i + 1,
                text: line.to_string(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax {
                line: i + 1,
                text: line.to_string(),
            });
        }
        layer.push(i + 1, key, value.to_string())?;
    }
    if layer.get("tau").is_some() && layer.get("CFL").is_some() {
        return Err(ConfigError::TauAndCfl);
    }
    Ok(layer)
}

fn value<T: FromStr>(line: usize, key: &'static str, text: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    text.parse::<T>().map_err(|e| ConfigError::InvalidValue {
        line,
        key,
        message: format!("'{text}': {e}"),
    })
}

fn positive(line: usize, key: &'static str, text: &str) -> Result<f64, ConfigError> {
    let x: f64 = value(line, key, text)?;
    if !(x.is_finite() && x > 0.0) {
        return Err(ConfigError::InvalidValue {
            line,
            key,
            message: format!("'{text}' is not a positive number"),
        });
    }
    Ok(x)
}

fn list(line: usize, key: &'static str, text: &str, allow_zero: bool) -> Result<Vec<f64>, ConfigError> {
    text.split(',')
        .map(|item| {
            let x: f64 = value(line, key, item.trim())?;
            if !(x.is_finite() && (x > 0.0 || (allow_zero && x == 0.0))) {
                return Err(ConfigError::InvalidValue {
                    line,
                    key,
                    message: format!("'{}' is out of range", item.trim()),
                });
            }
            Ok(x)
        })
        .collect()
}

impl Config {
    pub fn apply(&mut self, layer: &ConfigLayer) -> Result<(), ConfigError> {
        if layer.get("tau").is_some() && layer.get("CFL").is_some() {
            return Err(ConfigError::TauAndCfl);
        }
        for (line, key, text) in &layer.entries {
            let (line, key, text) = (*line, *key, text.as_str());
            match key {
                "scheme" => self.scheme = value(line, key, text)?,
                "problem" => self.problem = value(line, key, text)?,
                "K" => {
                    let k: usize = value(line, key, text)?;
                    if k < 8 || !k.is_power_of_two() {
                        return Err(ConfigError::InvalidValue {
                            line,
                            key,
                            message: format!("{k} is not a power of two >= 8"),
                        });
                    }
                    self.modes = Some(k);
                }
                "L" => self.length = Some(positive(line, key, text)?),
                "tau" => self.step = Step::Tau(positive(line, key, text)?),
                "CFL" => self.step = Step::Cfl(positive(line, key, text)?),
                "T" => {
                    let t: f64 = value(line, key, text)?;
                    if !(t.is_finite() && t >= 0.0) {
                        return Err(ConfigError::InvalidValue {
                            line,
                            key,
                            message: format!("'{text}' is not a time >= 0"),
                        });
                    }
                    self.t_end = t;
                }
                "sample_every" => {
                    let n: u64 = value(line, key, text)?;
                    if n == 0 {
                        return Err(ConfigError::InvalidValue {
                            line,
                            key,
                            message: "must be >= 1".into(),
                        });
                    }
                    self.sample_every = n;
                }
                "s_norm" => {
                    let s: f64 = value(line, key, text)?;
                    if !s.is_finite() {
                        return Err(ConfigError::InvalidValue {
                            line,
                            key,
                            message: format!("'{text}' is not finite"),
                        });
                    }
                    self.s_norm = s;
                }
                "B" => self.b = positive(line, key, text)?,
                "C" => {
                    let c: f64 = value(line, key, text)?;
                    if !c.is_finite() {
                        return Err(ConfigError::InvalidValue {
                            line,
                            key,
                            message: format!("'{text}' is not finite"),
                        });
                    }
                    self.c = c;
                }
                "dealias" => self.dealias = value(line, key, text)?,
                "coupled" => self.coupled = value(line, key, text)?,
                "out_dir" => self.out_dir = Some(PathBuf::from(text)),
                "taus" => self.taus = list(line, key, text, false)?,
                "times" => self.times = Some(list(line, key, text, true)?),
                "init_file" => self.init_file = Some(PathBuf::from(text)),
                _ => unreachable!("layer only holds known keys"),
            }
        }
        Ok(())
    }

    /// Grid size, falling back to the problem default.
    pub fn modes(&self) -> usize {
        self.modes.unwrap_or(match self.problem {
            ProblemKind::Example1 => DEFAULT_EXAMPLE1_MODES,
            _ => DEFAULT_SOLITON_MODES,
        })
    }

    pub fn length(&self) -> f64 {
        self.length.unwrap_or(match self.problem {
            ProblemKind::Example1 => DEFAULT_EXAMPLE1_LENGTH,
            _ => DEFAULT_SOLITON_LENGTH,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        self.times
            .clone()
            .unwrap_or_else(|| vec![0.0, 0.5 * self.t_end, self.t_end])
    }

    /// Every setting as `key=value` pairs, for logs and params lines.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let mut out = vec![
            ("scheme", self.scheme.to_string()),
            ("problem", self.problem.to_string()),
            ("K", self.modes().to_string()),
            ("L", format!("{:?}", self.length())),
        ];
        out.push(match self.step {
            Step::Tau(t) => ("tau", format!("{t:?}")),
            Step::Cfl(c) => ("CFL", format!("{c:?}")),
        });
        out.extend([
            ("T", format!("{:?}", self.t_end)),
            ("sample_every", self.sample_every.to_string()),
            ("s_norm", format!("{:?}", self.s_norm)),
            ("B", format!("{:?}", self.b)),
            ("C", format!("{:?}", self.c)),
            ("dealias", self.dealias.to_string()),
            ("coupled", self.coupled.to_string()),
            ("taus", join(&self.taus)),
            ("times", join(&self.times())),
        ]);
        if let Some(p) = &self.out_dir {
            out.push(("out_dir", p.display().to_string()));
        }
        if let Some(p) = &self.init_file {
            out.push(("init_file", p.display().to_string()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = Config::default();
        assert_eq!(c.modes(), 512);
        assert_eq!(c.length(), 20.0 * std::f64::consts::PI);
        let mut e = Config::default();
        e.apply(&parse_config("problem=example1").unwrap()).unwrap();
        assert_eq!(e.modes(), 1024);
        assert_eq!(e.length(), 2.0 * std::f64::consts::PI);
        assert_eq!(c.times(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn parses_every_key() {
        let text = "# comment\n\nscheme = first\nproblem=example1\nK=256\nL=6.5\ntau=0.01\nT=2\nsample_every=5\ns_norm=-1\nB=0.4\nC=-0.2\ndealias=true\ncoupled=false\nout_dir=/tmp/x\ntaus=0.1, 0.05,0.025,0.0125\ntimes=0,1\ninit_file=a.csv\n";
        let mut c = Config::default();
        c.apply(&parse_config(text).unwrap()).unwrap();
        assert_eq!(c.scheme, SchemeChoice::Single(Method::Trig(Scheme::FirstOrder)));
        assert_eq!(c.modes(), 256);
        assert_eq!(c.step, Step::Tau(0.01));
        assert_eq!((c.t_end, c.sample_every, c.s_norm, c.b, c.c), (2.0, 5, -1.0, 0.4, -0.2));
        assert!(c.dealias && !c.coupled);
        assert_eq!(c.taus, vec![0.1, 0.05, 0.025, 0.0125]);
        assert_eq!(c.times(), vec![0.0, 1.0]);
        assert_eq!(c.init_file, Some(PathBuf::from("a.csv")));
    }

    #[test]
    fn later_layers_override() {
        let mut c = Config::default();
        c.apply(&parse_config("CFL=3.2\nK=1024").unwrap()).unwrap();
        c.apply(&ConfigLayer::from_pairs([("tau", "0.001".to_string())]).unwrap()).unwrap();
        assert_eq!(c.step, Step::Tau(0.001));
        assert_eq!(c.modes(), 1024);
    }

    #[test]
    fn rejects_bad_files() {
        let cases: [(&str, fn(&ConfigError) -> bool); 7] = [
            ("K", |e| matches!(e, ConfigError::Syntax { line: 1, .. })),
            ("bogus=1", |e| matches!(e, ConfigError::UnknownKey { .. })),
            ("K=8\nK=16", |e| matches!(e, ConfigError::DuplicateKey { line: 2, key: "K" })),
            ("tau=0.1\nCFL=2", |e| *e == ConfigError::TauAndCfl),
            ("K=100", |e| matches!(e, ConfigError::InvalidValue { key: "K", .. })),
            ("T=-1", |e| matches!(e, ConfigError::InvalidValue { key: "T", .. })),
            ("taus=0.1,x", |e| matches!(e, ConfigError::InvalidValue { key: "taus", .. })),
        ];
        for (text, check) in cases {
            let err = parse_config(text).and_then(|l| Config::default().apply(&l)).unwrap_err();
            assert!(check(&err), "{text}: {err:?}");
        }
    }

    #[test]
    fn pairs_round_trip() {
        let mut c = Config::default();
        c.apply(&parse_config("scheme=rk4\ntau=0.0001\ntimes=0,0.5").unwrap()).unwrap();
        let text: String = c.pairs().iter().map(|(k, v)| format!("{k}={v}\n")).collect();
        let mut back = Config::default();
        back.apply(&parse_config(&text).unwrap()).unwrap();
        assert_eq!(back, Config { modes: Some(512), length: Some(c.length()), ..c });
    }
}

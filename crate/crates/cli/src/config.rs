//! Run configuration shared by all subcommands.
//!
//! A config is a flat set of `key=value` pairs. It can be read from a file
//! (one pair per line, `#` starts a comment), overridden by command-line
//! flags, and is echoed into every CSV as `# config: key=value ...` so the
//! header parses back into the same configuration.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use centralspin::{ApproxRegistry, ChainSpec, FieldSet, InitialState};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    Ground,
    Thermal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis2 {
    LambdaI,
    Temperature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Weak,
    Strong,
}

/// `start:stop:steps`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.steps)
    }
}

impl FromStr for SweepRange {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Config(format!("range must look like start:stop:steps (got '{s}')")));
        }
        let r = Self {
            start: parse_num("range start", parts[0])?,
            stop: parse_num("range stop", parts[1])?,
            steps: parse_num("range steps", parts[2])?,
        };
        if r.steps < 2 {
            return Err(CliError::Config(format!("range needs at least 2 steps (got {})", r.steps)));
        }
        Ok(r)
    }
}

/// `steps` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let last = (steps - 1) as f64;
            (0..steps).map(|i| start + (stop - start) * (i as f64 / last)).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub gamma: f64,
    pub g: f64,
    pub lambda_i: f64,
    pub lambda_e: f64,
    pub init: InitKind,
    pub temperature: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub axis2: Option<Axis2>,
    pub range: Option<SweepRange>,
    pub approx: Vec<String>,
    pub regime: Regime,
    pub force: bool,
    /// Not part of the echoed header.
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 100,
            gamma: 1.0,
            g: 0.05,
            lambda_i: 1.0,
            lambda_e: 1.0,
            init: InitKind::Ground,
            temperature: 1.0,
            t_max: 10.0,
            t_steps: 501,
            axis2: None,
            range: None,
            approx: Vec::new(),
            regime: Regime::Weak,
            force: false,
            out: None,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("cannot parse {key} from '{value}'")))
}

fn parse_bool(key: &str, value: &str) -> CliResult<bool> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Config(format!("cannot parse {key} from '{value}' (expected true or false)"))),
    }
}

/// Keys in header order.
pub const KEYS: [&str; 15] = [
    "n", "gamma", "g", "lambda_i", "lambda_e", "init", "temperature", "t_max", "t_steps", "axis2", "range",
    "approx", "regime", "force", "out",
];

impl RunConfig {
    /// Set one key from its textual value. Dashes in keys are accepted as
    /// underscores.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "n" => self.n = parse_num("n", value)?,
            "gamma" => self.gamma = parse_num("gamma", value)?,
            "g" => self.g = parse_num("g", value)?,
            "lambda_i" => self.lambda_i = parse_num("lambda_i", value)?,
            "lambda_e" => self.lambda_e = parse_num("lambda_e", value)?,
            "init" => {
                self.init = match value {
                    "ground" => InitKind::Ground,
                    "thermal" => InitKind::Thermal,
                    _ => return Err(CliError::Config(format!("init must be ground or thermal (got '{value}')"))),
                }
            }
            "temperature" => self.temperature = parse_num("temperature", value)?,
            "t_max" => self.t_max = parse_num("t_max", value)?,
            "t_steps" => self.t_steps = parse_num("t_steps", value)?,
            "axis2" => {
                self.axis2 = match value {
                    "none" | "" => None,
                    "lambda_i" => Some(Axis2::LambdaI),
                    "temperature" => Some(Axis2::Temperature),
                    _ => {
                        return Err(CliError::Config(format!(
                            "axis2 must be lambda_i or temperature (got '{value}')"
                        )))
                    }
                }
            }
            "range" => {
                self.range = match value {
                    "none" | "" => None,
                    _ => Some(value.parse()?),
                }
            }
            "approx" => {
                self.approx = match value {
                    "none" | "" => Vec::new(),
                    _ => value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
                }
            }
            "regime" => {
                self.regime = match value {
                    "weak" => Regime::Weak,
                    "strong" => Regime::Strong,
                    _ => return Err(CliError::Config(format!("regime must be weak or strong (got '{value}')"))),
                }
            }
            "force" => self.force = parse_bool("force", value)?,
            "out" => self.out = if value.is_empty() || value == "-" { None } else { Some(PathBuf::from(value)) },
            other => return Err(CliError::Config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Apply `key=value` lines; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> CliResult<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value, got '{raw}'", i + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_file(path: &std::path::Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    /// `# config: key=value ...` without trailing newline. Floats use the
    /// shortest representation that parses back exactly.
    pub fn header(&self) -> String {
        let mut s = String::from("# config:");
        for key in KEYS {
            if key == "out" {
                continue;
            }
            let _ = write!(s, " {key}={}", self.value_of(key));
        }
        s
    }

    fn value_of(&self, key: &str) -> String {
        match key {
            "n" => self.n.to_string(),
            "gamma" => self.gamma.to_string(),
            "g" => self.g.to_string(),
            "lambda_i" => self.lambda_i.to_string(),
            "lambda_e" => self.lambda_e.to_string(),
            "init" => match self.init {
                InitKind::Ground => "ground".into(),
                InitKind::Thermal => "thermal".into(),
            },
            "temperature" => self.temperature.to_string(),
            "t_max" => self.t_max.to_string(),
            "t_steps" => self.t_steps.to_string(),
            "axis2" => match self.axis2 {
                None => "none".into(),
                Some(Axis2::LambdaI) => "lambda_i".into(),
                Some(Axis2::Temperature) => "temperature".into(),
            },
            "range" => match self.range {
                None => "none".into(),
                Some(r) => format!("{}:{}:{}", r.start, r.stop, r.steps),
            },
            "approx" => {
                if self.approx.is_empty() {
                    "none".into()
                } else {
                    self.approx.join(",")
                }
            }
            "regime" => match self.regime {
                Regime::Weak => "weak".into(),
                Regime::Strong => "strong".into(),
            },
            "force" => self.force.to_string(),
            "out" => self.out.as_ref().map_or("-".into(), |p| p.display().to_string()),
            _ => unreachable!("unknown key {key}"),
        }
    }

    /// Inverse of [`RunConfig::header`].
    pub fn parse_header(line: &str) -> CliResult<Self> {
        let body = line
            .trim_end()
            .strip_prefix("# config:")
            .ok_or_else(|| CliError::Config("header must start with '# config:'".into()))?;
        let mut cfg = Self::default();
        for pair in body.split_whitespace() {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("malformed header entry '{pair}'")))?;
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    /// Checks that do not depend on the subcommand.
    pub fn validate(&self) -> CliResult<()> {
        if self.t_steps < 2 {
            return Err(CliError::Config(format!("t_steps must be at least 2 (got {})", self.t_steps)));
        }
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            return Err(CliError::Config(format!("t_max must be finite and >= 0 (got {})", self.t_max)));
        }
        if self.init == InitKind::Thermal && !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(CliError::Config(format!(
                "thermal init needs a positive temperature (got {})",
                self.temperature
            )));
        }
        if self.axis2 == Some(Axis2::Temperature) && self.init != InitKind::Thermal {
            return Err(CliError::Config("a temperature sweep requires init=thermal".into()));
        }
        let registry = ApproxRegistry::builtin();
        for name in &self.approx {
            if registry.get(name).is_none() {
                return Err(CliError::Config(format!(
                    "unknown approximation '{name}' (available: {})",
                    registry.names().join(", ")
                )));
            }
        }
        self.chain()?;
        self.fields()?;
        Ok(())
    }

    pub fn chain(&self) -> CliResult<ChainSpec> {
        Ok(ChainSpec::new(self.n, self.gamma)?)
    }

    pub fn fields(&self) -> CliResult<FieldSet> {
        Ok(FieldSet::new(self.lambda_i, self.lambda_e, self.g)?)
    }

    pub fn initial_state(&self) -> CliResult<InitialState> {
        Ok(match self.init {
            InitKind::Ground => InitialState::Ground,
            InitKind::Thermal => InitialState::thermal(self.temperature)?,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        linspace(0.0, self.t_max, self.t_steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.apply_text(
            "n = 200\ngamma=0.7 # anisotropy\n\ng=0.0123\nlambda_i=-0.3\ninit=thermal\ntemperature=0.5\n\
             axis2=temperature\nrange=0.01:20:40\napprox=weak,closed\nregime=strong\nforce=true\nt_steps=17",
        )
        .unwrap();
        let back = RunConfig::parse_header(&cfg.header()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn header_omits_output_path() {
        let mut cfg = RunConfig::default();
        cfg.set("out", "/tmp/x.csv").unwrap();
        assert!(!cfg.header().contains("out="));
        assert_eq!(RunConfig::parse_header(&cfg.header()).unwrap().out, None);
    }

    #[test]
    fn dashed_keys() {
        let mut cfg = RunConfig::default();
        cfg.set("lambda-e", "1.25").unwrap();
        cfg.set("t-max", "3").unwrap();
        assert_eq!((cfg.lambda_e, cfg.t_max), (1.25, 3.0));
    }

    #[test]
    fn rejects_bad_values() {
        let mut cfg = RunConfig::default();
        assert!(cfg.set("n", "ten").is_err());
        assert!(cfg.set("bogus", "1").is_err());
        assert!(cfg.set("range", "0:1").is_err());
        assert!(cfg.set("range", "0:1:1").is_err());
        assert!(cfg.apply_text("n 10").is_err());
        cfg.t_steps = 1;
        assert!(cfg.validate().is_err());
        let cfg = RunConfig { axis2: Some(Axis2::Temperature), ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig { approx: vec!["nope".into()], ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig { n: 7, ..RunConfig::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let r: SweepRange = "0:2:3".parse().unwrap();
        assert_eq!(r.values(), vec![0.0, 1.0, 2.0]);
        let cfg = RunConfig { t_max: 2.0, t_steps: 3, ..RunConfig::default() };
        assert_eq!(cfg.times(), vec![0.0, 1.0, 2.0]);
    }
}

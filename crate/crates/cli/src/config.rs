//! Flag parsing, `key = value` config files and the resolved run settings.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qtgp", version, about = "Geometric phases of a decaying two-spin system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Analytic eigensystem at one parameter point
    Eig,
    /// Berry phase of one branch over the φ-loop
    Berry,
    /// Schmidt-term split of the φ-loop phase
    Split,
    /// Jump phase of a branch over θ and κ grids
    Jump,
    /// Berry phase over a (θ, κ) grid
    Sweep,
    /// Critical decay rate of the θ = π/2 discontinuity
    Kappa0,
    /// One sampled quantum-jump trajectory
    Trajectory,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eig => "eig",
            Command::Berry => "berry",
            Command::Split => "split",
            Command::Jump => "jump",
            Command::Sweep => "sweep",
            Command::Kappa0 => "kappa0",
            Command::Trajectory => "trajectory",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Polar field angle: value or min:max:steps
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Azimuthal field angle: value or min:max:steps
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Spin-spin coupling: value or min:max:steps
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// Decay rate: value or min:max:steps
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kappa: Option<String>,
    /// Analytic branch 1..4
    #[arg(long, global = true)]
    pub branch: Option<usize>,
    /// Samples on the φ-loop
    #[arg(long, global = true)]
    pub loop_points: Option<usize>,
    /// Integrator steps for trajectories
    #[arg(long, global = true)]
    pub ode_steps: Option<usize>,
    /// Trajectory duration
    #[arg(long, global = true)]
    pub duration: Option<f64>,
    /// Trajectory random seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Bisection tolerance for kappa0
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Half-width of the θ window around π/2 for kappa0
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Indicator threshold for kappa0
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    /// Upper end of the kappa0 search interval
    #[arg(long, global = true)]
    pub kappa_max: Option<f64>,
    /// Output file (standard output if absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format (default from the --out extension, else per command)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Read angles in degrees
    #[arg(long, global = true)]
    pub degrees: bool,
    /// Flat key = value file; explicit flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for grid commands
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// A scalar or an inclusive grid `min:max:steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Value(f64),
    Grid { min: f64, max: f64, steps: usize },
}

impl Axis {
    pub fn parse(name: &str, text: &str) -> Result<Self, UsageError> {
        let bad = |what: &str| UsageError(format!("--{name}: {what} in '{text}'"));
        let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
        let parts: Vec<&str> = text.split(':').collect();
        let axis = match parts.as_slice() {
            [v] => Axis::Value(number(v)?),
            [lo, hi, n] => {
                let steps = n.trim().parse::<usize>().map_err(|_| bad("grid steps must be a positive integer"))?;
                let (min, max) = (number(lo)?, number(hi)?);
                if steps == 0 {
                    return Err(bad("grid needs at least one step"));
                }
                if !(min <= max) {
                    return Err(bad("grid needs min <= max"));
                }
                Axis::Grid { min, max, steps }
            }
            _ => return Err(bad("expected a value or min:max:steps")),
        };
        if axis.values().iter().any(|x| !x.is_finite()) {
            return Err(bad("non-finite value"));
        }
        Ok(axis)
    }

    fn scaled(self, s: f64) -> Self {
        match self {
            Axis::Value(v) => Axis::Value(v * s),
            Axis::Grid { min, max, steps } => Axis::Grid { min: min * s, max: max * s, steps },
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::Value(v) => vec![v],
            Axis::Grid { min, steps: 1, .. } => vec![min],
            Axis::Grid { min, max, steps } => {
                let last = (steps - 1) as f64;
                (0..steps).map(|i| if i + 1 == steps { max } else { min + (max - min) * i as f64 / last }).collect()
            }
        }
    }

    pub fn scalar(&self, name: &str) -> Result<f64, UsageError> {
        match *self {
            Axis::Value(v) => Ok(v),
            Axis::Grid { .. } => Err(UsageError(format!("--{name} takes a single value for this command"))),
        }
    }
}

/// Settings after merging flags, config file and defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub theta: Axis,
    pub phi: Axis,
    pub g: Axis,
    pub kappa: Axis,
    pub branch: usize,
    pub loop_points: usize,
    pub ode_steps: usize,
    pub duration: f64,
    pub seed: u64,
    pub tol: f64,
    pub epsilon: f64,
    pub threshold: f64,
    pub kappa_max: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: Option<usize>,
}

const KEYS: [&str; 17] = [
    "theta", "phi", "g", "kappa", "branch", "loop_points", "ode_steps", "duration", "seed", "tol", "epsilon",
    "threshold", "kappa_max", "out", "format", "degrees", "jobs",
];

/// Parses a flat `key = value` file. Blank lines and `#` comments are skipped;
/// dashes in keys are read as underscores.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| UsageError(format!("config line {}: expected key = value", n + 1)))?;
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(UsageError(format!("config line {}: unknown key '{key}'", n + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_value<V: std::str::FromStr>(key: &str, text: &str) -> Result<V, UsageError> {
    text.parse().map_err(|_| UsageError(format!("{key}: cannot parse '{text}'")))
}

impl RunConfig {
    pub fn resolve(command: Command, flags: Flags) -> Result<Self, UsageError> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        let pick = |key: &str, flag: Option<String>| flag.or_else(|| file.get(key).cloned());
        fn typed<V: std::str::FromStr>(
            key: &str,
            flag: Option<V>,
            file: &BTreeMap<String, String>,
            default: V,
        ) -> Result<V, UsageError> {
            match (flag, file.get(key)) {
                (Some(v), _) => Ok(v),
                (None, Some(text)) => parse_value(key, text),
                (None, None) => Ok(default),
            }
        }

        let degrees = flags.degrees || file.get("degrees").map(|v| parse_value::<bool>("degrees", v)).transpose()?.unwrap_or(false);
        let angle = if degrees { PI / 180.0 } else { 1.0 };
        let axis = |key: &str, flag: Option<String>, default: Option<f64>| -> Result<Axis, UsageError> {
            match pick(key, flag) {
                Some(text) => Axis::parse(key, &text),
                None => default.map(Axis::Value).ok_or_else(|| UsageError(format!("--{key} is required"))),
            }
        };
        let theta_default = if command == Command::Kappa0 { Some(PI / 2.0) } else { None };
        let theta = match pick("theta", flags.theta.clone()) {
            Some(text) => Axis::parse("theta", &text)?.scaled(angle),
            None => theta_default.map(Axis::Value).ok_or_else(|| UsageError("--theta is required".into()))?,
        };
        let phi_default = if command == Command::Jump { PI } else { 0.0 };
        let phi = match pick("phi", flags.phi.clone()) {
            Some(text) => Axis::parse("phi", &text)?.scaled(angle),
            None => Axis::Value(phi_default),
        };
        let g = axis("g", flags.g.clone(), Some(1.0))?;
        let kappa = axis("kappa", flags.kappa.clone(), Some(0.0))?;

        let out = pick("out", flags.out.as_ref().map(|p| p.display().to_string())).map(PathBuf::from);
        let format = match (flags.format, file.get("format")) {
            (Some(f), _) => f,
            (None, Some(text)) => Format::from_str(text, true).map_err(|_| UsageError(format!("format: unknown '{text}'")))?,
            (None, None) => match out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
                Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
                Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
                _ if matches!(command, Command::Sweep | Command::Jump) => Format::Csv,
                _ => Format::Json,
            },
        };

        let cfg = RunConfig {
            command,
            theta,
            phi,
            g,
            kappa,
            branch: typed("branch", flags.branch, &file, 1)?,
            loop_points: typed("loop_points", flags.loop_points, &file, 1024)?,
            ode_steps: typed("ode_steps", flags.ode_steps, &file, 100_000)?,
            duration: typed("duration", flags.duration, &file, 10.0)?,
            seed: typed("seed", flags.seed, &file, 0)?,
            tol: typed("tol", flags.tol, &file, 1e-2)?,
            epsilon: typed("epsilon", flags.epsilon, &file, 1e-3)?,
            threshold: typed("threshold", flags.threshold, &file, 0.5)?,
            kappa_max: typed("kappa_max", flags.kappa_max, &file, 5.0)?,
            out,
            format,
            jobs: match (flags.jobs, file.get("jobs")) {
                (Some(j), _) => Some(j),
                (None, Some(text)) => Some(parse_value("jobs", text)?),
                (None, None) => None,
            },
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), UsageError> {
        if !(1..=4).contains(&self.branch) {
            return Err(UsageError(format!("--branch must be 1..4, got {}", self.branch)));
        }
        if self.loop_points < 4 {
            return Err(UsageError("--loop-points must be at least 4".into()));
        }
        if self.ode_steps == 0 {
            return Err(UsageError("--ode-steps must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(UsageError("--jobs must be positive".into()));
        }
        for (name, v) in [("duration", self.duration), ("tol", self.tol), ("epsilon", self.epsilon), ("kappa-max", self.kappa_max)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(UsageError(format!("--{name} must be positive")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_both_endpoints() {
        let a = Axis::parse("theta", "0:2:5").unwrap();
        assert_eq!(a.values(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(Axis::parse("theta", "0.3:0.3:1").unwrap().values(), vec![0.3]);
    }

    #[test]
    fn bad_grids_are_usage_errors() {
        for text in ["1:0:3", "0:1:0", "a", "0:1", "0:1:2:3", "nan"] {
            assert!(Axis::parse("theta", text).is_err(), "{text}");
        }
    }

    #[test]
    fn config_file_parsing() {
        let map = parse_config("# comment\ntheta = 1.0\nloop-points=64 # trailing\n\n").unwrap();
        assert_eq!(map["theta"], "1.0");
        assert_eq!(map["loop_points"], "64");
        assert!(parse_config("bogus = 1").is_err());
        assert!(parse_config("theta 1").is_err());
    }
}

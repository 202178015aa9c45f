//! Flag parsing and the effective configuration.
//!
//! Every parameter can come from a flag, from a `key=value` file given with
//! `--config`, or from a built-in default, in that order of precedence. Keys
//! in the file are the long flag names without dashes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::Context;
use clap::{Args, ValueEnum};
use fracstab::{ClassifyThresholds, Complex64, Family, FractionalOrderPair, SimOptions, StabilityConfig, WeightScheme};

/// Bad user input. Maps to exit code 2.
#[derive(Debug)]
pub struct Invalid(pub String);

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Invalid(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Uniform,
    Caputo,
}

/// Accepts `1.5`, `-2i`, `0.3-0.7i` and friends.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    Complex64::from_str(&t).map_err(|_| format!("not a complex number: {s:?}"))
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("bad number {v:?}: {e}")))
        .collect()
}

#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    /// Two-term model (the default).
    #[arg(long, conflicts_with = "one_term")]
    pub two_term: bool,
    /// One-term model of order N.
    #[arg(long)]
    pub one_term: bool,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Linear coefficient of the two-term model, e.g. `1.891-0.624i`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub b: Option<Complex64>,
    /// Coefficient of the one-term model.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub c: Option<Complex64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Order of the one-term model; defaults to ceil(alpha).
    #[arg(long = "N", id = "N")]
    pub big_n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x1: Option<f64>,
    /// Comma-separated initial values x(0), ..., x(N-1).
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub init: Option<Vec<f64>>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Minimum number of boundary samples.
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long)]
    pub eps_boundary: Option<f64>,
    #[arg(long)]
    pub tol_converge: Option<f64>,
    #[arg(long)]
    pub bound_escape: Option<f64>,
    #[arg(long)]
    pub tail_fraction: Option<f64>,
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG picture here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Shade the stable region in SVG output.
    #[arg(long)]
    pub fill: bool,
    /// Worker threads for sweeps.
    #[arg(long, env = "FRACSTAB_JOBS")]
    pub jobs: Option<usize>,
    /// File of `key=value` lines used for anything not given as a flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "family", "alpha", "beta", "a", "b", "c", "mu", "N", "x0", "x1", "init", "steps", "resolution",
    "eps-boundary", "tol-converge", "bound-escape", "tail-fraction", "scheme", "format", "jobs",
];

pub fn read_config_file(path: &Path) -> anyhow::Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(invalid(format!("{}:{}: unknown key {k:?}", path.display(), i + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

/// Resolved parameters shared by every command.
#[derive(Debug, Clone)]
pub struct Settings {
    pub one_term: bool,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<Complex64>,
    pub c: Option<Complex64>,
    pub mu: Option<f64>,
    pub big_n: Option<usize>,
    pub x0: Option<f64>,
    pub x1: Option<f64>,
    pub init: Option<Vec<f64>>,
    pub steps: Option<usize>,
    pub resolution: usize,
    pub eps_boundary: f64,
    pub thresholds: ClassifyThresholds,
    pub scheme: WeightScheme,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub fill: bool,
    pub jobs: Option<usize>,
}

fn pick<T: FromStr>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str) -> anyhow::Result<Option<T>>
where
    T::Err: fmt::Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|e| invalid(format!("config {key}={v}: {e}"))),
    }
}

fn pick_with<T>(
    flag: Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
    parse: impl Fn(&str) -> Result<T, String>,
) -> anyhow::Result<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    file.get(key).map(|v| parse(v).map_err(|e| invalid(format!("config {key}: {e}")))).transpose()
}

impl Settings {
    pub fn resolve(p: &Params) -> anyhow::Result<Self> {
        let file = match &p.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let one_term = if p.one_term || p.two_term {
            p.one_term
        } else {
            match file.get("family").map(String::as_str) {
                None | Some("two-term") => false,
                Some("one-term") => true,
                Some(other) => return Err(invalid(format!("config family={other}: expected two-term or one-term"))),
            }
        };
        let defaults = ClassifyThresholds::default();
        let thresholds = ClassifyThresholds {
            tol_converge: pick(p.tol_converge, &file, "tol-converge")?.unwrap_or(defaults.tol_converge),
            bound_escape: pick(p.bound_escape, &file, "bound-escape")?.unwrap_or(defaults.bound_escape),
            tail_fraction: pick(p.tail_fraction, &file, "tail-fraction")?.unwrap_or(defaults.tail_fraction),
        };
        let scheme = pick_with(p.scheme, &file, "scheme", |v| Scheme::from_str(v, true))?;
        let stab = StabilityConfig::default();
        let s = Settings {
            one_term,
            alpha: pick(p.alpha, &file, "alpha")?,
            beta: pick(p.beta, &file, "beta")?,
            a: pick(p.a, &file, "a")?,
            b: pick_with(p.b, &file, "b", parse_complex)?,
            c: pick_with(p.c, &file, "c", parse_complex)?,
            mu: pick(p.mu, &file, "mu")?,
            big_n: pick(p.big_n, &file, "N")?,
            x0: pick(p.x0, &file, "x0")?,
            x1: pick(p.x1, &file, "x1")?,
            init: pick_with(p.init.clone(), &file, "init", parse_list)?,
            steps: pick(p.steps, &file, "steps")?,
            resolution: pick(p.resolution, &file, "resolution")?.unwrap_or(stab.resolution),
            eps_boundary: pick(p.eps_boundary, &file, "eps-boundary")?.unwrap_or(stab.eps_boundary),
            thresholds,
            scheme: match scheme {
                Some(Scheme::Caputo) => WeightScheme::Caputo,
                _ => WeightScheme::Uniform,
            },
            format: pick_with(p.format, &file, "format", |v| Format::from_str(v, true))?,
            out: p.out.clone(),
            svg: p.svg.clone(),
            fill: p.fill,
            jobs: pick(p.jobs, &file, "jobs")?,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> anyhow::Result<()> {
        if self.resolution < 1024 {
            return Err(invalid(format!("resolution must be at least 1024, got {}", self.resolution)));
        }
        if !(self.eps_boundary > 0.0) {
            return Err(invalid("eps-boundary must be positive"));
        }
        let th = &self.thresholds;
        if !(th.tol_converge > 0.0 && th.bound_escape > 0.0) {
            return Err(invalid("tol-converge and bound-escape must be positive"));
        }
        if !(th.tail_fraction > 0.0 && th.tail_fraction <= 0.5) {
            return Err(invalid("tail-fraction must lie in (0, 0.5]"));
        }
        if self.jobs == Some(0) {
            return Err(invalid("jobs must be at least 1"));
        }
        Ok(())
    }

    pub fn need<T: Copy>(v: Option<T>, name: &str) -> anyhow::Result<T> {
        v.ok_or_else(|| invalid(format!("--{name} is required")))
    }

    pub fn alpha(&self) -> anyhow::Result<f64> {
        Self::need(self.alpha, "alpha")
    }

    pub fn orders(&self) -> anyhow::Result<FractionalOrderPair> {
        Ok(FractionalOrderPair::new(self.alpha()?, Self::need(self.beta, "beta")?)?)
    }

    pub fn big_n(&self) -> anyhow::Result<usize> {
        let alpha = self.alpha()?;
        Ok(self.big_n.unwrap_or_else(|| alpha.ceil().max(1.0) as usize))
    }

    pub fn family(&self) -> anyhow::Result<Family> {
        if self.one_term {
            Ok(Family::one_term(self.alpha()?, self.big_n()?)?)
        } else {
            Ok(Family::TwoTerm { orders: self.orders()?, a: Self::need(self.a, "a")? })
        }
    }

    pub fn stability(&self) -> StabilityConfig {
        StabilityConfig { resolution: self.resolution, eps_boundary: self.eps_boundary }
    }

    pub fn sim_options(&self) -> SimOptions {
        SimOptions { scheme: self.scheme, ..Default::default() }
    }

    pub fn pool(&self) -> anyhow::Result<rayon::ThreadPool> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = self.jobs {
            b = b.num_threads(j);
        }
        b.build().context("building worker pool")
    }

    /// Effective configuration as `key=value` pairs for output headers.
    pub fn meta(&self, command: &str) -> Vec<(String, String)> {
        let mut m = vec![("command".to_string(), command.to_string())];
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                m.push((k.to_string(), v));
            }
        };
        put("family", Some(if self.one_term { "one-term" } else { "two-term" }.into()));
        put("alpha", self.alpha.map(|v| v.to_string()));
        put("beta", self.beta.map(|v| v.to_string()));
        put("a", self.a.map(|v| v.to_string()));
        put("b", self.b.map(|v| v.to_string()));
        put("c", self.c.map(|v| v.to_string()));
        put("mu", self.mu.map(|v| v.to_string()));
        if self.one_term {
            put("N", self.big_n().ok().map(|v| v.to_string()));
        }
        put("x0", self.x0.map(|v| v.to_string()));
        put("x1", self.x1.map(|v| v.to_string()));
        put(
            "init",
            self.init.as_ref().map(|v| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")),
        );
        put("steps", self.steps.map(|v| v.to_string()));
        put("resolution", Some(self.resolution.to_string()));
        put("eps-boundary", Some(self.eps_boundary.to_string()));
        put("tol-converge", Some(self.thresholds.tol_converge.to_string()));
        put("bound-escape", Some(self.thresholds.bound_escape.to_string()));
        put("tail-fraction", Some(self.thresholds.tail_fraction.to_string()));
        put("scheme", Some(format!("{:?}", self.scheme).to_lowercase()));
        put("jobs", self.jobs.map(|v| v.to_string()));
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("2.168-0.7312i").unwrap(), Complex64::new(2.168, -0.7312));
        assert_eq!(parse_complex("-0.08687-0.9862i").unwrap(), Complex64::new(-0.08687, -0.9862));
        assert_eq!(parse_complex("0.7").unwrap(), Complex64::new(0.7, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), Complex64::new(1.0, 2.0));
        assert!(parse_complex("one").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("fracstab-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "# comment\nalpha = 1.8\nbeta=0.5\na=2\nsteps=10\n").unwrap();
        let p = Params { a: Some(3.0), config: Some(path), ..Default::default() };
        let s = Settings::resolve(&p).unwrap();
        assert_eq!((s.alpha, s.beta, s.a, s.steps), (Some(1.8), Some(0.5), Some(3.0), Some(10)));
        assert_eq!(s.resolution, 4096);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn unknown_key_is_invalid() {
        let dir = std::env::temp_dir().join(format!("fracstab-cfg-bad-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "gamma=2\n").unwrap();
        let err = read_config_file(&path).unwrap_err();
        assert!(err.is::<Invalid>());
        std::fs::remove_dir_all(dir).unwrap();
    }
}

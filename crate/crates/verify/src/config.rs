//! Suite configuration: typed parameters, the `key = value` file format and
//! validation against the preconditions of the numerical routines.

use rmt_core::hardy::HardyFunction;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Invalid configuration, located by a dotted field path such as `sl2.eta`.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("config error at `{path}`: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { path: path.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Classical,
    Sl2,
    Su1n,
    CCalculus,
    Bounds,
    Counterexample,
    All,
}

impl Suite {
    /// Concrete suites in execution order.
    pub const CONCRETE: [Suite; 6] =
        [Suite::Classical, Suite::Sl2, Suite::Su1n, Suite::CCalculus, Suite::Bounds, Suite::Counterexample];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Classical => "classical",
            Suite::Sl2 => "sl2",
            Suite::Su1n => "su1n",
            Suite::CCalculus => "c-calculus",
            Suite::Bounds => "bounds",
            Suite::Counterexample => "counterexample",
            Suite::All => "all",
        }
    }

    pub fn expand(&self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::CONCRETE.to_vec(),
            s => vec![*s],
        }
    }

    /// Case groups a suite can run; see [`SuiteConfig::cases`].
    pub fn groups(&self) -> &'static [&'static str] {
        match self {
            Suite::Classical => &["mellin", "reconstruction"],
            Suite::Sl2 => &["compact-dual", "series-contour", "eta", "transform", "discrete", "variant", "rectangle"],
            Suite::Su1n => &["oracle", "round-trip", "kappa", "series-contour", "eta", "transform", "residues"],
            Suite::CCalculus => &["factorization", "normalization", "dimension"],
            Suite::Bounds => &["hilbert-schmidt", "growth", "strip", "growth-chi", "strip-chi", "restriction"],
            Suite::Counterexample => &["sl2", "su1n"],
            Suite::All => &[],
        }
    }

    /// Parameter keys a suite reads.
    fn keys(&self) -> &'static [&'static str] {
        match self {
            Suite::Classical => &["a", "eta", "tol"],
            Suite::Sl2 => &["n", "a", "eta", "tol"],
            Suite::Su1n => &["n", "l", "a", "eta", "tol"],
            Suite::CCalculus => &["n", "l", "tol", "seed", "samples"],
            Suite::Bounds => &[],
            Suite::Counterexample => &[],
            Suite::All => &[],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Suite::CONCRETE
            .iter()
            .chain([Suite::All].iter())
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| {
                ConfigError::new("suite", format!("unknown suite `{s}` (classical|sl2|su1n|c-calculus|bounds|counterexample|all)"))
            })
    }
}

/// Parameters shared by every suite; `None` means the suite's default grid.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Params {
    pub n: Option<i64>,
    pub l: Option<i32>,
    /// Hardy-class data as `NAME[:k=v,...]`.
    pub a: Option<String>,
    pub eta: Option<f64>,
    /// Overrides the identity tolerances; certificates keep their bounds.
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    /// Random spectral samples per (n, l) in the c-calculus suite.
    pub samples: Option<usize>,
    /// Case groups to run; `None` runs all, an empty list runs none.
    pub cases: Option<Vec<String>>,
}

impl Params {
    /// Fields set in `other` replace those here.
    pub fn overlay(&self, other: &Params) -> Params {
        Params {
            n: other.n.or(self.n),
            l: other.l.or(self.l),
            a: other.a.clone().or_else(|| self.a.clone()),
            eta: other.eta.or(self.eta),
            tol: other.tol.or(self.tol),
            seed: other.seed.or(self.seed),
            samples: other.samples.or(self.samples),
            cases: other.cases.clone().or_else(|| self.cases.clone()),
        }
    }

    fn set(&mut self, key: &str, value: &str, path: &str) -> Result<(), ConfigError> {
        fn num<T: FromStr>(v: &str, path: &str, what: &str) -> Result<T, ConfigError> {
            v.parse().map_err(|_| ConfigError::new(path, format!("`{v}` is not {what}")))
        }
        match key {
            "n" => self.n = Some(num(value, path, "an integer")?),
            "l" => self.l = Some(num(value, path, "an integer")?),
            "a" => self.a = Some(value.to_string()),
            "eta" => self.eta = Some(num(value, path, "a number")?),
            "tol" => self.tol = Some(num(value, path, "a number")?),
            "seed" => self.seed = Some(num(value, path, "a non-negative integer")?),
            "samples" => self.samples = Some(num(value, path, "a non-negative integer")?),
            "cases" => self.cases = Some(parse_list(value)),
            _ => return Err(ConfigError::new(path, format!("unknown key `{key}`"))),
        }
        Ok(())
    }
}

/// Comma-separated list; blank entries dropped.
pub fn parse_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

/// A parsed configuration file: top-level parameters plus per-suite
/// sections that override them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigFile {
    pub suite: Option<Suite>,
    pub global: Params,
    pub sections: BTreeMap<Suite, Params>,
}

impl ConfigFile {
    /// Parses UTF-8 `key = value` lines. `#` and `;` start comments;
    /// `[name]` opens a suite section (`[general]` is the top level).
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut out = ConfigFile::default();
        let mut section: Option<Suite> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |key: &str| match section {
                Some(s) => format!("{s}.{key}"),
                None => key.to_string(),
            };
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::new(format!("line {}", i + 1), "unterminated section header"))?
                    .trim();
                section = match name {
                    "general" => None,
                    _ => match name.parse::<Suite>() {
                        Ok(Suite::All) | Err(_) => {
                            return Err(ConfigError::new(format!("[{name}]"), "unknown section"));
                        }
                        Ok(s) => Some(s),
                    },
                };
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::new(format!("line {}", i + 1), format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "suite" && section.is_none() {
                out.suite = Some(value.parse()?);
                continue;
            }
            let params = match section {
                Some(s) => out.sections.entry(s).or_default(),
                None => &mut out.global,
            };
            params.set(key, value, &at(key))?;
        }
        Ok(out)
    }
}

/// Everything `run_suite` needs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteConfig {
    pub suite: Option<Suite>,
    /// Applies to every suite.
    pub global: Params,
    /// Per-suite overrides.
    pub sections: BTreeMap<Suite, Params>,
}

/// Default seed for randomized grids.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Parameters of one concrete suite after layering and validation.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub suite: Suite,
    pub n: Option<i64>,
    pub l: Option<i32>,
    pub a: Option<HardyFunction>,
    pub eta: Option<f64>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub samples: usize,
    pub cases: Option<Vec<String>>,
}

impl Resolved {
    pub fn enabled(&self, group: &str) -> bool {
        self.cases.as_ref().is_none_or(|c| c.iter().any(|g| g == group))
    }

    pub fn any_enabled(&self) -> bool {
        self.suite.groups().iter().any(|g| self.enabled(g))
    }

    /// Configured tolerance or the suite default.
    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        SuiteConfig { suite: Some(suite), ..Default::default() }
    }

    /// File values first, then `cli` on top.
    pub fn from_file(file: ConfigFile, cli: Params, suite: Option<Suite>) -> Self {
        SuiteConfig { suite: suite.or(file.suite), global: file.global.overlay(&cli), sections: file.sections }
    }

    /// Validates every concrete suite and returns their parameters in order.
    pub fn resolve(&self) -> Result<Vec<Resolved>, ConfigError> {
        let suite = self.suite.ok_or_else(|| ConfigError::new("suite", "no suite given"))?;
        let single = suite != Suite::All;
        for s in self.sections.keys() {
            if single && *s != suite {
                return Err(ConfigError::new(format!("[{s}]"), format!("section does not apply to suite `{suite}`")));
            }
        }
        suite
            .expand()
            .into_iter()
            .map(|s| {
                let p = match self.sections.get(&s) {
                    Some(sec) => self.global.overlay(sec),
                    None => self.global.clone(),
                };
                resolve_one(s, &p, single, self.sections.contains_key(&s))
            })
            .collect()
    }
}

fn resolve_one(suite: Suite, p: &Params, strict: bool, has_section: bool) -> Result<Resolved, ConfigError> {
    let path = |key: &str| format!("{suite}.{key}");
    // keys a suite does not read are an error when the suite was chosen
    // explicitly; under `all` they only apply where meaningful
    let set: [(&str, bool); 7] = [
        ("n", p.n.is_some()),
        ("l", p.l.is_some()),
        ("a", p.a.is_some()),
        ("eta", p.eta.is_some()),
        ("tol", p.tol.is_some()),
        ("seed", p.seed.is_some()),
        ("samples", p.samples.is_some()),
    ];
    if strict || has_section {
        for (key, present) in set {
            if present && !suite.keys().contains(&key) {
                return Err(ConfigError::new(path(key), format!("not used by suite `{suite}`")));
            }
        }
    }
    let uses = |key: &str| suite.keys().contains(&key);
    if let Some(cases) = &p.cases {
        if strict {
            for c in cases {
                if !suite.groups().contains(&c.as_str()) {
                    return Err(ConfigError::new(
                        path("cases"),
                        format!("unknown case group `{c}` (known: {})", suite.groups().join(", ")),
                    ));
                }
            }
        }
    }
    let n = p.n.filter(|_| uses("n"));
    let l = p.l.filter(|_| uses("l"));
    match suite {
        Suite::Sl2 => {
            if let Some(n) = n {
                if n == 0 || n.abs() > 8 {
                    return Err(ConfigError::new(path("n"), format!("need 1 ≤ |n| ≤ 8, got {n}")));
                }
            }
        }
        Suite::Su1n | Suite::CCalculus => {
            let hi = if suite == Suite::CCalculus { 8 } else { 5 };
            if let Some(n) = n {
                if !(2..=hi).contains(&n) {
                    return Err(ConfigError::new(path("n"), format!("need 2 ≤ n ≤ {hi}, got {n}")));
                }
            }
            if let Some(l) = l {
                // SU(1,n) needs |l| < n; n itself may come from the default grid
                let ns = n.map_or_else(|| default_su1n_ns(suite), |n| vec![n]);
                if !ns.iter().any(|&n| (l.unsigned_abs() as i64) < n) {
                    return Err(ConfigError::new(path("l"), format!("need |l| < n for n in {ns:?}, got {l}")));
                }
            }
        }
        _ => {}
    }
    let a = match p.a.as_deref().filter(|_| uses("a")) {
        None => None,
        Some(spec) => {
            let a = HardyFunction::parse(spec).map_err(|e| ConfigError::new(path("a"), e.to_string()))?;
            // the scalar theorem allows A < π, the line-bundle theorems A < π/2
            let (ok, bound) = match suite {
                Suite::Classical => (a.growth < std::f64::consts::PI, "π"),
                _ => (a.admissible(), "π/2"),
            };
            if !ok {
                return Err(ConfigError::new(path("a"), format!("growth A = {} is not below {bound}", a.growth)));
            }
            let t_max = match suite {
                Suite::Sl2 => 0.8,
                Suite::Su1n => 0.4,
                _ => 0.0,
            };
            if t_max > 0.0 && a.p <= t_max {
                return Err(ConfigError::new(path("a"), format!("decay p = {} must exceed the largest t = {t_max}", a.p)));
            }
            Some(a)
        }
    };
    let eta = match p.eta.filter(|_| uses("eta")) {
        None => None,
        Some(eta) => {
            let delta = a.as_ref().map_or(1.0, |a| a.delta);
            // the SU(1,n) contour may move up to min(nδ, ρ) ≥ δ; δ binds for
            // every suite, and the scalar contour must also stay left of 0 and
            // right of −1
            let (lo_open, hi) = match suite {
                Suite::Classical => (true, delta.min(1.0)),
                _ => (false, delta),
            };
            let lo_ok = if lo_open { eta > 0.0 } else { eta >= 0.0 };
            if !(eta.is_finite() && lo_ok && eta < hi) {
                let lo = if lo_open { "0 <" } else { "0 ≤" };
                return Err(ConfigError::new(path("eta"), format!("need {lo} eta < {hi}, got {eta}")));
            }
            Some(eta)
        }
    };
    let tol = match p.tol.filter(|_| uses("tol")) {
        Some(t) if !(t > 0.0 && t < 1.0) => {
            return Err(ConfigError::new(path("tol"), format!("need 0 < tol < 1, got {t}")));
        }
        t => t,
    };
    let samples = p.samples.unwrap_or(100);
    if samples == 0 || samples > 100_000 {
        return Err(ConfigError::new(path("samples"), format!("need 1 ≤ samples ≤ 100000, got {samples}")));
    }
    Ok(Resolved {
        suite,
        n,
        l,
        a,
        eta,
        tol,
        seed: p.seed.unwrap_or(DEFAULT_SEED),
        samples,
        cases: p.cases.clone(),
    })
}

/// n values the SU(1,n) suites run when `n` is not given.
pub fn default_su1n_ns(suite: Suite) -> Vec<i64> {
    match suite {
        Suite::CCalculus => vec![2, 3, 4, 5],
        _ => vec![2, 3],
    }
}

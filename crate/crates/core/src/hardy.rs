//! Hardy-class interpolation data a ∈ 𝓗(A, p, δ): holomorphic on
//! Re λ > −δ with |a(λ)| ≤ C e^{−p Re λ + A |Im λ|}.
//!
//! Functions are built from a small registry keyed by name with optional
//! `k=v` parameters, e.g. `exp:p=1.5` or `constant:k=2`.

use crate::error::{Error, Result};
use crate::special_fn::{cos_pi, rgamma, sin_pi};
use crate::Cx;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

type Eval = Arc<dyn Fn(Cx) -> Cx + Send + Sync>;

/// A holomorphic function together with its declared class constants.
#[derive(Clone)]
pub struct HardyFunction {
    /// Registry name with parameters, e.g. `exp:p=1`.
    pub name: String,
    /// Growth constant A along vertical lines.
    pub growth: f64,
    /// Decay rate p along the real axis.
    pub p: f64,
    /// Half-plane margin δ.
    pub delta: f64,
    /// Envelope constant C.
    pub constant: f64,
    f: Eval,
}

impl fmt::Debug for HardyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HardyFunction")
            .field("name", &self.name)
            .field("growth", &self.growth)
            .field("p", &self.p)
            .field("delta", &self.delta)
            .field("constant", &self.constant)
            .finish()
    }
}

/// Names accepted by [`HardyFunction::parse`].
pub const REGISTRY: [&str; 6] = [
    "exp",
    "exp-over",
    "gamma-reciprocal",
    "constant",
    "counterexample-cos",
    "counterexample-sin",
];

fn parse_params(spec: &str) -> Result<(String, Vec<(String, f64)>)> {
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n.trim(), r),
        None => (spec.trim(), ""),
    };
    let mut params = Vec::new();
    for kv in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::domain(format!("hardy parameter `{kv}` is not k=v")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("hardy parameter `{kv}`: not a number")))?;
        params.push((k.trim().to_string(), v));
    }
    Ok((name.to_string(), params))
}

fn take(params: &mut Vec<(String, f64)>, key: &str, default: f64) -> f64 {
    match params.iter().position(|(k, _)| k == key) {
        Some(i) => params.remove(i).1,
        None => default,
    }
}

impl HardyFunction {
    pub fn new<F>(name: impl Into<String>, growth: f64, p: f64, delta: f64, constant: f64, f: F) -> Self
    where
        F: Fn(Cx) -> Cx + Send + Sync + 'static,
    {
        HardyFunction { name: name.into(), growth, p, delta, constant, f: Arc::new(f) }
    }

    /// Build from a registry spec `NAME[:k=v,...]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, mut params) = parse_params(spec)?;
        let h = match name.as_str() {
            "exp" => {
                let p = take(&mut params, "p", 1.0);
                if p <= 0.0 {
                    return Err(Error::domain("exp: p must be positive"));
                }
                Self::exp(p)
            }
            "exp-over" => {
                let p = take(&mut params, "p", 1.0);
                let delta = take(&mut params, "delta", 0.5);
                if p <= 0.0 || !(delta > 0.0 && delta < 1.0) {
                    return Err(Error::domain("exp-over: need p > 0 and 0 < delta < 1"));
                }
                Self::exp_over(p, delta)
            }
            "gamma-reciprocal" => Self::gamma_reciprocal(),
            "constant" => Self::constant_fn(take(&mut params, "k", 1.0)),
            "counterexample-cos" => Self::counterexample_cos(),
            "counterexample-sin" => Self::counterexample_sin(),
            other => {
                return Err(Error::domain(format!(
                    "unknown hardy function `{other}` (known: {})",
                    REGISTRY.join(", ")
                )))
            }
        };
        if let Some((k, _)) = params.first() {
            return Err(Error::domain(format!("{name}: unknown parameter `{k}`")));
        }
        Ok(h)
    }

    /// a(λ) = e^{−pλ}; A = 0, δ = 1, C = 1.
    pub fn exp(p: f64) -> Self {
        Self::new(format!("exp:p={p}"), 0.0, p, 1.0, 1.0, move |l: Cx| (-p * l).exp())
    }

    /// a(λ) = e^{−pλ}/(λ+1); A = 0, C = 1/(1−δ).
    pub fn exp_over(p: f64, delta: f64) -> Self {
        Self::new(
            format!("exp-over:p={p},delta={delta}"),
            0.0,
            p,
            delta,
            1.0 / (1.0 - delta),
            move |l: Cx| (-p * l).exp() / (l + 1.0),
        )
    }

    /// a(λ) = 1/Γ(λ+1), the classical case f(x) = e^{−x}. A = π/2 + 0.1
    /// (admissible only for the scalar theorem, which needs A < π), p = 1,
    /// δ = 1, C from sampling with margin.
    pub fn gamma_reciprocal() -> Self {
        Self::new("gamma-reciprocal", PI / 2.0 + 0.1, 1.0, 1.0, 4.0, |l: Cx| rgamma(l + 1.0))
    }

    /// a ≡ k; A = 0, p = 0, δ = 1.
    pub fn constant_fn(k: f64) -> Self {
        Self::new(format!("constant:k={k}"), 0.0, 0.0, 1.0, k.abs().max(f64::MIN_POSITIVE), move |_| {
            Cx::new(k, 0.0)
        })
    }

    /// a(λ) = λ cos(πλ/2): borderline growth A = π/2, vanishes at odd integers.
    pub fn counterexample_cos() -> Self {
        Self::new("counterexample-cos", PI / 2.0, 0.0, 1.0, 1.0, |l: Cx| l * cos_pi(l / 2.0))
    }

    /// a(λ) = λ sin(πλ/2): borderline growth A = π/2, vanishes at even integers.
    pub fn counterexample_sin() -> Self {
        Self::new("counterexample-sin", PI / 2.0, 0.0, 1.0, 1.0, |l: Cx| l * sin_pi(l / 2.0))
    }

    pub fn eval(&self, lambda: Cx) -> Cx {
        (self.f)(lambda)
    }

    /// The declared envelope C e^{−p Re λ + A |Im λ|}.
    pub fn envelope(&self, lambda: Cx) -> f64 {
        self.constant * (-self.p * lambda.re + self.growth * lambda.im.abs()).exp()
    }

    /// Admissible for the line-bundle theorems (A < π/2).
    pub fn admissible(&self) -> bool {
        self.growth < PI / 2.0
    }

    /// Bound on |a| along the positive real axis, |a(x)| ≤ C e^{−px}.
    pub fn real_axis_bound(&self, x: f64) -> f64 {
        self.constant * (-self.p * x).exp()
    }
}

/// Sample points of 𝓗(δ): Re λ from just right of −δ out to `extent`,
/// Im λ symmetric and log-spaced, `count` values per axis.
pub fn hardy_grid(delta: f64, extent: f64, count: usize) -> Vec<Cx> {
    let count = count.max(2);
    let log_spaced = |lo: f64, hi: f64| -> Vec<f64> {
        (0..count)
            .map(|j| lo * (hi / lo).powf(j as f64 / (count - 1) as f64))
            .collect()
    };
    let mut res = vec![-0.99 * delta, -0.5 * delta, 0.0];
    res.extend(log_spaced(0.05, extent));
    let mut ims = vec![0.0];
    for y in log_spaced(0.05, extent) {
        ims.push(y);
        ims.push(-y);
    }
    res.iter()
        .flat_map(|&x| ims.iter().map(move |&y| Cx::new(x, y)))
        .collect()
}

/// Outcome of [`hardy_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyCheck {
    /// max |a(λ)| e^{p Re λ − A|Im λ|} over the grid.
    pub max_ratio: f64,
    /// Where the maximum was attained.
    pub worst: Cx,
    /// Largest Cauchy–Riemann residual, relative to the local scale.
    pub holomorphy_residual: f64,
    /// max_ratio ≤ C (up to roundoff), A < π/2 and a small residual.
    pub pass: bool,
}

/// Relative residual of ∂f/∂x + i ∂f/∂y = 0 by fourth-order central
/// differences.
pub fn cauchy_riemann_residual<F: Fn(Cx) -> Cx>(f: F, z: Cx) -> f64 {
    let h = 1e-3;
    let d = |e: Cx| (f(z - 2.0 * e) - 8.0 * f(z - e) + 8.0 * f(z + e) - f(z + 2.0 * e)) / (12.0 * h);
    let dx = d(Cx::new(h, 0.0));
    let dy = d(Cx::new(0.0, h));
    let scale = dx.norm() + dy.norm() + f(z).norm() / (1.0 + z.norm());
    if scale == 0.0 {
        0.0
    } else {
        (dx + Cx::i() * dy).norm() / scale
    }
}

/// Samples 𝓗(δ) and verifies |a(λ)| e^{p Re λ − A|Im λ|} ≤ C, together with
/// a holomorphy residual on the same grid. Functions with A ≥ π/2 never pass.
pub fn hardy_bound_check(a: &HardyFunction, count: usize) -> HardyCheck {
    let grid = hardy_grid(a.delta, 40.0, count);
    let ratios = crate::par::map(&grid, |&l| {
        let v = a.eval(l).norm();
        let r = v * (a.p * l.re - a.growth * l.im.abs()).exp();
        let cr = cauchy_riemann_residual(|z| a.eval(z), l);
        (r, cr)
    });
    let mut max_ratio = 0.0f64;
    let mut worst = Cx::new(0.0, 0.0);
    let mut cr_max = 0.0f64;
    for (&l, &(r, cr)) in grid.iter().zip(&ratios) {
        if !(r <= max_ratio) {
            max_ratio = r;
            worst = l;
        }
        cr_max = cr_max.max(cr);
    }
    let pass = max_ratio <= a.constant * (1.0 + 1e-12) && a.admissible() && cr_max < 1e-8;
    HardyCheck { max_ratio, worst, holomorphy_residual: cr_max, pass }
}

/// Probe the borderline growth: for any A′ < π/2, the ratio
/// |a(λ)| e^{p Re λ − A′|Im λ|} along Re λ = 0 keeps growing with |Im λ|.
/// Returns the ratios at the given heights.
pub fn growth_ratios(a: &HardyFunction, growth: f64, heights: &[f64]) -> Vec<f64> {
    heights
        .iter()
        .map(|&y| a.eval(Cx::new(0.0, y)).norm() * (-growth * y).exp())
        .collect()
}

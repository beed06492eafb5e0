//! Radial profiles t ↦ f(a_t) with decay metadata, as consumed by the
//! spherical transforms.

use crate::error::{Error, Result};
use crate::Cx;
use std::collections::HashMap;
use std::sync::Mutex;

/// Envelope for |f(a_t)|, t ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileDecay {
    /// |f| ≤ C e^{−rate·t}.
    Exponential { constant: f64, rate: f64 },
    /// |f| ≤ C e^{−alpha·t²}.
    Gaussian { constant: f64, alpha: f64 },
    /// f vanishes for t ≥ end.
    Support { end: f64 },
}

impl ProfileDecay {
    /// Bound on ∫_T^∞ |f(t)| e^{g t} dt, or ∞ if the envelope does not
    /// dominate the weight at T.
    pub fn weighted_tail(&self, end: f64, growth: f64) -> f64 {
        match *self {
            ProfileDecay::Exponential { constant, rate } => {
                if rate <= growth {
                    f64::INFINITY
                } else {
                    constant * ((growth - rate) * end).exp() / (rate - growth)
                }
            }
            ProfileDecay::Gaussian { constant, alpha } => {
                let d = 2.0 * alpha * end - growth;
                if d <= 0.0 {
                    f64::INFINITY
                } else {
                    constant * (-alpha * end * end + growth * end).exp() / d
                }
            }
            ProfileDecay::Support { end: e } => {
                if end >= e {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Smallest T (on a 1/8 grid) with weighted tail below `tol`.
    pub fn truncation(&self, growth: f64, tol: f64) -> Result<f64> {
        if let ProfileDecay::Support { end } = *self {
            return Ok(end);
        }
        let mut t = 0.5;
        while self.weighted_tail(t, growth) > tol {
            t += 0.125;
            if t > 200.0 {
                return Err(Error::Divergence(format!(
                    "profile decay does not dominate weight growth e^{{{growth}t}}"
                )));
            }
        }
        Ok(t)
    }
}

/// A radial profile t ↦ f(a_t).
pub trait RadialProfile: Sync {
    fn eval(&self, t: f64) -> Cx;

    /// Decay certificate; transforms refuse profiles without one.
    fn decay(&self) -> Option<ProfileDecay>;
}

/// Profile given by a closure.
pub struct FnProfile<F> {
    f: F,
    decay: Option<ProfileDecay>,
}

impl<F: Fn(f64) -> Cx + Sync> FnProfile<F> {
    pub fn new(f: F, decay: ProfileDecay) -> Self {
        FnProfile { f, decay: Some(decay) }
    }

    /// A profile without a decay certificate (rejected by transforms).
    pub fn uncertified(f: F) -> Self {
        FnProfile { f, decay: None }
    }
}

impl<F: Fn(f64) -> Cx + Sync> RadialProfile for FnProfile<F> {
    fn eval(&self, t: f64) -> Cx {
        (self.f)(t)
    }

    fn decay(&self) -> Option<ProfileDecay> {
        self.decay
    }
}

/// Samples on the uniform grid t_j = t0 + j·h, local eight-point Lagrange
/// interpolation in between, zero beyond the last sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    pub t0: f64,
    pub h: f64,
    pub values: Vec<Cx>,
    pub decay: Option<ProfileDecay>,
}

const STENCIL: usize = 8;

impl SampledProfile {
    pub fn sample<F: Fn(f64) -> Cx + Sync + Send>(f: F, t0: f64, t1: f64, points: usize, decay: Option<ProfileDecay>) -> Self {
        let h = (t1 - t0) / (points - 1) as f64;
        let ts: Vec<f64> = (0..points).map(|j| t0 + h * j as f64).collect();
        let values = crate::par::map(&ts, |&t| f(t));
        SampledProfile { t0, h, values, decay }
    }
}

impl RadialProfile for SampledProfile {
    fn eval(&self, t: f64) -> Cx {
        let n = self.values.len();
        let x = (t - self.t0) / self.h;
        if x < 0.0 || x > (n - 1) as f64 || n < STENCIL {
            return Cx::new(0.0, 0.0);
        }
        // stencil j..j+8 centred on the cell containing x
        let half = STENCIL / 2 - 1;
        let j = (x.floor() as usize).saturating_sub(half).min(n - STENCIL);
        let u = x - j as f64;
        let mut out = Cx::new(0.0, 0.0);
        for k in 0..STENCIL {
            let mut w = 1.0;
            for m in 0..STENCIL {
                if m != k {
                    w *= (u - m as f64) / (k as f64 - m as f64);
                }
            }
            out += self.values[j + k] * w;
        }
        out
    }

    fn decay(&self) -> Option<ProfileDecay> {
        self.decay
    }
}

/// Thread-safe memo for an expensive spectral function λ ↦ F(λ), so that
/// repeated inversions at different points reuse transform values.
pub struct Memo<F> {
    f: F,
    cache: Mutex<HashMap<(u64, u64), Cx>>,
}

impl<F: Fn(Cx) -> Cx + Sync> Memo<F> {
    pub fn new(f: F) -> Self {
        Memo { f, cache: Mutex::new(HashMap::new()) }
    }

    pub fn get(&self, z: Cx) -> Cx {
        let key = (z.re.to_bits(), z.im.to_bits());
        if let Some(v) = self.cache.lock().expect("memo lock").get(&key) {
            return *v;
        }
        let v = (self.f)(z);
        self.cache.lock().expect("memo lock").insert(key, v);
        v
    }

    pub fn len(&self) -> usize {
        self.cache.lock().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx;

    #[test]
    fn interpolation_exact_on_degree_seven() {
        let f = |t: f64| cx(t.powi(7) - t * t * t - 2.0 * t, 0.5 * t);
        let p = SampledProfile::sample(f, 0.0, 3.0, 31, None);
        for &t in &[0.05, 1.234, 2.97] {
            assert!((p.eval(t) - f(t)).norm() < 1e-12);
        }
        assert_eq!(p.eval(3.5), cx(0.0, 0.0));
    }

    #[test]
    fn truncation_heights() {
        let g = ProfileDecay::Gaussian { constant: 1.0, alpha: 2.0 };
        let t = g.truncation(2.0, 1e-12).unwrap();
        assert!(g.weighted_tail(t, 2.0) <= 1e-12 && t < 5.0);
        let e = ProfileDecay::Exponential { constant: 1.0, rate: 1.0 };
        assert!(e.truncation(2.0, 1e-12).is_err());
    }

    #[test]
    fn memo_reuses() {
        let m = Memo::new(|z: Cx| z * z);
        assert_eq!(m.get(cx(2.0, 0.0)), cx(4.0, 0.0));
        m.get(cx(2.0, 0.0));
        assert_eq!(m.len(), 1);
    }
}

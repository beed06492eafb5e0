//! Master theorem for (n,n)-type functions on SL(2,R): the interpolating
//! factor b(λ), the spectral series, its contour representation with
//! discrete terms, residue bookkeeping on rectangles, the transform
//! identity, the scalar (Mellin) case and the borderline counterexample.
//!
//! Sign conventions. The factor b enters through
//! b(λ)μ(σ,λ) = c λ / cos(πλ/2) (n even) or c λ / sin(πλ/2) (n odd). The
//! constant c used here is fixed by matching residues against the series
//! coefficients:
//!
//! ```text
//! n even:  c =  (i/4)(−1)^{n/2}
//! n odd:   c = −(i/4)(−1)^{(n+1)/2}
//! ```
//!
//! [`BFactorSl2::printed`] keeps the alternative tabulated constants so that
//! reports can show both.

use crate::error::{Error, Result};
use crate::hardy::HardyFunction;
use crate::profile::{ProfileDecay, RadialProfile, SampledProfile};
use crate::quad::{
    integrate_rectangle, integrate_vertical_line, integrate_vertical_segment, sum_series_with_tail, DecayCertificate,
    QuadTol, Rectangle, TailBound,
};
use crate::sl2::{discrete_spectrum, phi_nn, psi_disc_with, CartanPoint, Parity, Sl2Kernel, Sl2Transform, KAPPA_SL2};
use crate::special_fn::{cos_pi, sin_pi};
use crate::su2::{decompose, inv_sl2, psi_exact, Mat2};
use crate::Cx;
use std::f64::consts::PI;

fn i() -> Cx {
    Cx::new(0.0, 1.0)
}

fn neg_one_pow(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The interpolating factor b(λ) for K-type n with normalization c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BFactorSl2 {
    pub n: i64,
    pub c: Cx,
}

impl BFactorSl2 {
    /// Residue-matched constant.
    pub fn new(n: i64) -> Self {
        let c = match Parity::of(n) {
            Parity::Even => i() * 0.25 * neg_one_pow(n / 2),
            Parity::Odd => -i() * 0.25 * neg_one_pow((n + 1) / 2),
        };
        BFactorSl2 { n, c }
    }

    /// Tabulated constant: (i/4)(−1)^{−n/2+1} (n even > 0),
    /// (i/4)(−1)^{−⌊n/2⌋+1} (n odd > 0), (i/4)(−1)^{n+1} (n even < 0) and
    /// (i/4)(−1)^{−(n+1)} (n odd < 0).
    pub fn printed(n: i64) -> Self {
        let e = if n >= 0 {
            -n.div_euclid(2) + 1
        } else if n % 2 == 0 {
            n + 1
        } else {
            -(n + 1)
        };
        BFactorSl2 { n, c: i() * 0.25 * neg_one_pow(e) }
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }

    /// b(λ)μ(σ,λ).
    pub fn b_mu(&self, lambda: Cx) -> Result<Cx> {
        let half = lambda / 2.0;
        match self.parity() {
            Parity::Even => {
                let d = cos_pi(half);
                if d.norm() < 1e-15 {
                    return Err(Error::Pole { at: lambda });
                }
                Ok(self.c * lambda / d)
            }
            Parity::Odd => {
                // λ / sin(πλ/2) → 2/π at 0
                if lambda.norm() < 1e-8 {
                    return Ok(self.c * 2.0 / PI * (1.0 + (PI * lambda).powu(2) / 24.0));
                }
                let d = sin_pi(half);
                if d.norm() < 1e-15 {
                    return Err(Error::Pole { at: lambda });
                }
                Ok(self.c * lambda / d)
            }
        }
    }

    /// b(λ) = (−2ci/π)/sin(πλ/2) (n even) or (2ci/π)/cos(πλ/2) (n odd).
    pub fn b(&self, lambda: Cx) -> Result<Cx> {
        let half = lambda / 2.0;
        let (num, d) = match self.parity() {
            Parity::Even => (-2.0 * self.c * i() / PI, sin_pi(half)),
            Parity::Odd => (2.0 * self.c * i() / PI, cos_pi(half)),
        };
        if d.norm() < 1e-15 {
            return Err(Error::Pole { at: lambda });
        }
        Ok(num / d)
    }

    /// Poles of b·μ in (0, bound): odd integers (n even) or positive even
    /// integers (n odd).
    pub fn poles_below(&self, bound: f64) -> Vec<i64> {
        let start = match self.parity() {
            Parity::Even => 1,
            Parity::Odd => 2,
        };
        (0..).map(|j| start + 2 * j).take_while(|&k| (k as f64) < bound).collect()
    }

    /// Closed-form residue of b·μ at a pole k:
    /// (−1)^{j+1}(2c/π)(2j+1) at k = 2j+1 (n even), (−1)^j (2c/π)(2j) at k = 2j (n odd).
    pub fn residue_b_mu(&self, k: i64) -> Result<Cx> {
        let ok = match self.parity() {
            Parity::Even => k.rem_euclid(2) == 1,
            Parity::Odd => k.rem_euclid(2) == 0 && k != 0,
        };
        if !ok {
            return Err(Error::domain(format!("b·μ has no pole at {k} for n = {}", self.n)));
        }
        let sign = match self.parity() {
            Parity::Even => neg_one_pow((k - 1) / 2 + 1),
            Parity::Odd => neg_one_pow(k / 2),
        };
        Ok(self.c * (2.0 / PI) * k as f64 * sign)
    }

    /// (a(λ)b(λ) + a(−λ)b(−λ))·μ(σ,λ), pole-free on |Re λ| < 1.
    pub fn sym_b_mu(&self, a: &HardyFunction, lambda: Cx) -> Result<Cx> {
        Ok(a.eval(lambda) * self.b_mu(lambda)? + a.eval(-lambda) * self.b_mu(-lambda)?)
    }

    /// S(λ) = a(λ)b(λ) + a(−λ)b(−λ). For n even b is odd with a pole at 0;
    /// near 0 the removable singularity is resolved by the mean value of the
    /// holomorphic S over a small circle.
    pub fn sym(&self, a: &HardyFunction, lambda: Cx) -> Result<Cx> {
        let direct = |l: Cx| -> Result<Cx> { Ok(a.eval(l) * self.b(l)? + a.eval(-l) * self.b(-l)?) };
        if self.parity() == Parity::Odd || lambda.norm() >= 1e-2 {
            return direct(lambda);
        }
        const NODES: usize = 32;
        let r = 0.05;
        let mut acc = Cx::new(0.0, 0.0);
        for k in 0..NODES {
            let z = lambda + Cx::from_polar(r, 2.0 * PI * (k as f64 + 0.5) / NODES as f64);
            acc += direct(z)?;
        }
        Ok(acc / NODES as f64)
    }
}

/// b(λ) with the residue-matched constant.
pub fn b_sl2(n: i64, lambda: Cx) -> Result<Cx> {
    BFactorSl2::new(n).b(lambda)
}

/// Weight in the negative-n series: (2m+n+1) as for n ≥ 0, or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesVariant {
    Weighted,
    Unweighted,
}

/// Where the spectral series is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesPoint {
    /// a_{t+is}; s ≠ 0 goes through the exact SU(2) coefficients.
    Cartan(CartanPoint),
    /// A point of SL(2,C) (n ≥ 0).
    Group(Mat2),
}

/// Certified value of the spectral series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Cx,
    pub terms: usize,
    pub tail: f64,
}

/// Machinery shared by the SL(2,R) checks for a fixed K-type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterSl2 {
    pub n: i64,
    pub kernel: Sl2Kernel,
    pub bfac: BFactorSl2,
    pub variant: SeriesVariant,
    pub tol: QuadTol,
}

/// Result of [`MasterSl2::rectangle_residue_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct RectangleCheck {
    pub k: i64,
    /// Counter-clockwise integral of a·b·μ·Φ over the rectangle.
    pub contour: Cx,
    /// 2πi Σ residues inside.
    pub residue_sum: Cx,
    /// ∫|·| over [bottom, right, top, left].
    pub edge_abs: [f64; 4],
    /// The right edge was moved off a pole.
    pub shifted: bool,
}

/// Result of [`MasterSl2::transform_identity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransformIdentity {
    pub lambdas: Vec<Cx>,
    /// (1/4π²) f̂_H(λ).
    pub lhs: Vec<Cx>,
    /// (1/2)(a(λ)b(λ) + a(−λ)b(−λ)).
    pub rhs: Vec<Cx>,
    /// (k, (1/2π) f̂_B(k), (−1)^{(k−n−1)/2} a(k)).
    pub discrete: Vec<(i64, Cx, Cx)>,
}

impl MasterSl2 {
    pub fn new(n: i64, kernel: Sl2Kernel) -> Self {
        MasterSl2 {
            n,
            kernel,
            bfac: BFactorSl2::new(n),
            variant: SeriesVariant::Weighted,
            tol: QuadTol::new(1e-12, 1e-11),
        }
    }

    /// First series index: 0 for n ≥ 0, ⌊|n|/2⌋ for n < 0.
    pub fn first_index(&self) -> usize {
        if self.n >= 0 {
            0
        } else {
            (self.n.unsigned_abs() / 2) as usize
        }
    }

    fn phi_at(&self, lambda: f64, m: usize, point: &SeriesPoint) -> Result<Cx> {
        match point {
            SeriesPoint::Cartan(p) if p.s == 0.0 => self.kernel.eval(Cx::new(lambda, 0.0), self.n, p.t),
            SeriesPoint::Cartan(p) => phi_nn(Cx::new(lambda, 0.0), self.n, *p),
            SeriesPoint::Group(g) => psi_exact(m, self.n, g),
        }
    }

    /// Σ_m (−1)^{m+1} w_m a(2m+n+1) Φ_{2m+n+1}(point) with w_m = 2m+n+1
    /// (or 1 for the unweighted negative-n variant). Terms with 2m+n+1 ≤ 0
    /// are skipped. The number of terms comes from the tail bound with ratio
    /// e^{2(t−p)}; t ≥ p is reported as divergence.
    pub fn series(&self, a: &HardyFunction, point: SeriesPoint, abs_tol: f64) -> Result<SeriesValue> {
        let n = self.n;
        // |Φ_λ(point)| ≤ k · e^{(λ + beta) t}
        let (t, k, beta) = match point {
            SeriesPoint::Cartan(p) => {
                let p = CartanPoint::new(p.t, p.s)?;
                let t = p.t.abs();
                if p.s == 0.0 && n >= 0 {
                    (t, 1.0, -1.0)
                } else if p.s == 0.0 {
                    (t, 2.0 * (1.0 + t), 2.0 * n.abs() as f64 - 1.0)
                } else {
                    if n < 0 {
                        return Err(Error::domain("complex Cartan points need n ≥ 0"));
                    }
                    (t, 2.0 * (1.0 + t), 2.0 * n.abs() as f64)
                }
            }
            SeriesPoint::Group(g) => {
                if n < 0 {
                    return Err(Error::domain("group points need n ≥ 0"));
                }
                let d = decompose(&inv_sl2(&g).adjoint())?;
                (d.t.abs(), d.character_modulus(n), -1.0)
            }
        };
        if t >= a.p {
            return Err(Error::Divergence(format!(
                "series at t = {t} outside the convergence region |t| < p = {}",
                a.p
            )));
        }
        let point = match point {
            SeriesPoint::Cartan(p) if p.s != 0.0 => SeriesPoint::Group(crate::su2::a_t(p.tau())),
            other => other,
        };
        let m0 = self.first_index();
        let lambda0 = (2 * m0 as i64 + n + 1).max(0) as f64;
        let weighted = n >= 0 || self.variant == SeriesVariant::Weighted;
        let scale = if weighted { lambda0.max(2.0) } else { 1.0 };
        let bound = TailBound {
            constant: a.constant * k * (beta * t).exp() * scale * (lambda0 * (t - a.p)).exp(),
            ratio: (2.0 * (t - a.p)).exp(),
            degree: if weighted { 1 } else { 0 },
        };
        let sum = sum_series_with_tail(
            |j| {
                let m = m0 + j;
                let lam = 2 * m as i64 + n + 1;
                if lam <= 0 {
                    return Ok(Cx::new(0.0, 0.0));
                }
                let av = a.eval(Cx::new(lam as f64, 0.0));
                if av == Cx::new(0.0, 0.0) {
                    return Ok(av);
                }
                let w = if weighted { lam as f64 } else { 1.0 };
                Ok(neg_one_pow(m as i64 + 1) * w * av * self.phi_at(lam as f64, m, &point)?)
            },
            bound,
            abs_tol,
            10_000,
        )?;
        Ok(SeriesValue { value: sum.value, terms: sum.terms, tail: sum.tail })
    }

    /// Σ_{k∈L} (−1)^{(k−n−1)/2} k a(k) Ψ_k(a_t) for n > 0; empty for n ≤ 0.
    pub fn discrete_part(&self, a: &HardyFunction, t: f64) -> Result<Cx> {
        if self.n <= 0 {
            return Ok(Cx::new(0.0, 0.0));
        }
        let mut out = Cx::new(0.0, 0.0);
        for k in discrete_spectrum(self.n) {
            let sign = neg_one_pow((k - self.n - 1) / 2);
            out += sign * k as f64 * a.eval(Cx::new(k as f64, 0.0)) * psi_disc_with(self.kernel, k, self.n, t)?;
        }
        Ok(out)
    }

    fn line_integrand(&self, a: &HardyFunction, t: f64, lambda: Cx) -> Result<Cx> {
        Ok(0.5 * self.bfac.sym_b_mu(a, lambda)? * self.kernel.eval(lambda, self.n, t)?)
    }

    /// (1/2) ∫_{Re λ = −η} (a b + a(−·) b(−·))(λ) Φ_λ(a_t) μ(σ,λ) dλ, truncated
    /// with decay rate π/2 − A.
    pub fn contour_integral(&self, a: &HardyFunction, t: f64, eta: f64) -> Result<Cx> {
        self.contour_integral_tol(a, t, eta, self.tol)
    }

    fn contour_integral_tol(&self, a: &HardyFunction, t: f64, eta: f64, tol: QuadTol) -> Result<Cx> {
        if !(eta >= 0.0 && eta < a.delta) {
            return Err(Error::domain(format!("eta = {eta} outside [0, delta = {})", a.delta)));
        }
        let rate = PI / 2.0 - a.growth;
        let err = std::cell::Cell::new(None);
        let f = |l: Cx| match self.line_integrand(a, t, l) {
            Ok(v) => v,
            Err(e) => {
                err.set(Some(e));
                Cx::new(0.0, 0.0)
            }
        };
        let cert = DecayCertificate::fitted(|y| f(Cx::new(-eta, y)), rate, 1.0, &[2.0, 4.0, 8.0, 16.0]);
        let line = integrate_vertical_line(f, -eta, tol, cert)?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok(line.value)
    }

    /// Contour integral plus discrete terms.
    pub fn contour_rhs(&self, a: &HardyFunction, t: f64, eta: f64) -> Result<Cx> {
        Ok(self.contour_integral(a, t, eta)? + self.discrete_part(a, t)?)
    }

    /// ∮ a·b·μ·Φ over the rectangle with corners 0 ± 2ki, 2k ± 2ki versus
    /// 2πi Σ residues at the enclosed poles of b·μ.
    pub fn rectangle_residue_check(&self, a: &HardyFunction, t: f64, k: i64) -> Result<RectangleCheck> {
        let mut x1 = 2.0 * k as f64;
        let mut shifted = false;
        if self.bfac.b_mu(Cx::new(x1, 0.0)).is_err() {
            x1 += 1e-3;
            shifted = true;
        }
        let rect = Rectangle { x0: 0.0, x1, y0: -2.0 * k as f64, y1: 2.0 * k as f64 };
        let err = std::cell::Cell::new(None);
        let f = |l: Cx| {
            let v = self
                .bfac
                .b_mu(l)
                .and_then(|bm| Ok(a.eval(l) * bm * self.kernel.eval(l, self.n, t)?));
            match v {
                Ok(v) => v,
                Err(e) => {
                    err.set(Some(e));
                    Cx::new(0.0, 0.0)
                }
            }
        };
        let ri = integrate_rectangle(f, rect, self.tol)?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        let mut res = Cx::new(0.0, 0.0);
        for p in self.bfac.poles_below(x1) {
            let l = Cx::new(p as f64, 0.0);
            res += a.eval(l) * self.kernel.eval(l, self.n, t)? * self.bfac.residue_b_mu(p)?;
        }
        Ok(RectangleCheck { k, contour: ri.total, residue_sum: 2.0 * PI * i() * res, edge_abs: ri.edge_abs, shifted })
    }

    /// Uniform samples of the contour extension f(a_t) on [0, T] with a
    /// fitted exponential decay certificate. The decay rate is set by the
    /// slowest of the discrete terms e^{−(k+1)t} and the first pole of S off
    /// iR, less a margin.
    pub fn extension_profile(&self, a: &HardyFunction, step: f64, abs_tol: f64) -> Result<SampledProfile> {
        let pole: f64 = match self.bfac.parity() {
            Parity::Even => 2.0,
            Parity::Odd => 1.0,
        };
        let mut rate = 1.0 + pole.min(a.delta.max(pole));
        if self.n > 0 {
            if let Some(k) = discrete_spectrum(self.n).into_iter().map(|k| k.abs()).min() {
                rate = rate.min(k as f64 + 1.0);
            }
        }
        rate -= 0.1;
        let growth = 1.1;
        if rate <= growth {
            return Err(Error::Divergence(format!("extension decays at rate {rate} ≤ {growth}")));
        }
        // |Φ_{iy}(a_t)| ≤ (1+t)e^{−t}: an absolute tolerance on that scale keeps
        // the samples relatively accurate where f(a_t) itself is small
        let eval = |t: f64| -> Result<Cx> {
            let tol = QuadTol::new(1e-14 * (-t).exp(), self.tol.rel);
            Ok(self.contour_integral_tol(a, t, 0.0, tol)? + self.discrete_part(a, t)?)
        };
        let probe: Vec<f64> = (1..=8).map(|j| 2.0 * j as f64).collect();
        let vals = crate::par::try_map(&probe, |&t| eval(t))?;
        let constant = 4.0
            * probe
                .iter()
                .zip(&vals)
                .map(|(t, v)| v.norm() * (rate * t).exp())
                .fold(eval(0.0)?.norm(), f64::max);
        let decay = ProfileDecay::Exponential { constant, rate };
        let end = decay.truncation(growth, abs_tol / 10.0)?;
        let points = (end / step).ceil() as usize + 1;
        let ts: Vec<f64> = (0..points).map(|j| j as f64 * step).collect();
        let values = crate::par::try_map(&ts, |&t| eval(t))?;
        Ok(SampledProfile { t0: 0.0, h: step, values, decay: Some(decay) })
    }

    /// Transform of the contour extension at each λ ∈ iR against
    /// (1/2)(a(λ)b(λ) + a(−λ)b(−λ)), plus recovery of the discrete
    /// coefficients.
    pub fn transform_identity_check(&self, a: &HardyFunction, lambdas: &[Cx]) -> Result<TransformIdentity> {
        let f = self.extension_profile(a, 0.1, 1e-8)?;
        self.transform_identity_on(a, &f, lambdas)
    }

    /// [`MasterSl2::transform_identity_check`] on a precomputed extension.
    pub fn transform_identity_on(&self, a: &HardyFunction, f: &dyn RadialProfile, lambdas: &[Cx]) -> Result<TransformIdentity> {
        let mut tr = Sl2Transform::new(self.n, KAPPA_SL2, self.kernel);
        tr.tol = QuadTol::new(1e-10, 1e-9);
        let lhs = crate::par::try_map(lambdas, |&l| Ok::<_, Error>(tr.h(f, l)? / (4.0 * PI * PI)))?;
        let rhs = lambdas
            .iter()
            .map(|&l| Ok(0.5 * self.bfac.sym(a, l)?))
            .collect::<Result<Vec<_>>>()?;
        let mut discrete = Vec::new();
        if self.n > 0 {
            for k in discrete_spectrum(self.n) {
                let got = tr.b(f, k)? / (2.0 * PI);
                let want = neg_one_pow((k - self.n - 1) / 2) * a.eval(Cx::new(k as f64, 0.0));
                discrete.push((k, got, want));
            }
        }
        Ok(TransformIdentity { lambdas: lambdas.to_vec(), lhs, rhs, discrete })
    }
}

/// Series at a real Cartan point with the validated kernel, n ≥ 0 or the
/// weighted negative-n variant.
pub fn series_f_sl2(a: &HardyFunction, n: i64, point: SeriesPoint, abs_tol: f64) -> Result<Cx> {
    Ok(MasterSl2::new(n, Sl2Kernel::KIntegral).series(a, point, abs_tol)?.value)
}

/// Contour representation plus discrete terms at a_t.
pub fn contour_rhs_sl2(a: &HardyFunction, n: i64, t: f64, eta: f64) -> Result<Cx> {
    MasterSl2::new(n, Sl2Kernel::KIntegral).contour_rhs(a, t, eta)
}

/// Outcome of the negative-n weight ambiguity experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantResolution {
    /// (variant, max relative mismatch with the contour side).
    pub mismatch: Vec<(SeriesVariant, f64)>,
    /// Variants that match to the tolerance.
    pub consistent: Vec<SeriesVariant>,
}

/// Compares both negative-n series variants with the contour side on a
/// t-grid and keeps those that agree to `tol`.
pub fn resolve_series_variant(
    a: &HardyFunction,
    n: i64,
    kernel: Sl2Kernel,
    ts: &[f64],
    tol: f64,
) -> Result<VariantResolution> {
    let mut mismatch = Vec::new();
    let base = MasterSl2::new(n, kernel);
    let rhs = crate::par::try_map(ts, |&t| base.contour_rhs(a, t, 0.0))?;
    for v in [SeriesVariant::Weighted, SeriesVariant::Unweighted] {
        let m = MasterSl2 { variant: v, ..base };
        let mut worst = 0.0f64;
        for (&t, r) in ts.iter().zip(&rhs) {
            let s = m.series(a, SeriesPoint::Cartan(CartanPoint::real(t)), 1e-13)?.value;
            worst = worst.max((s - r).norm() / r.norm().max(1e-300));
        }
        mismatch.push((v, worst));
    }
    let consistent = mismatch.iter().filter(|(_, e)| *e <= tol).map(|(v, _)| *v).collect();
    Ok(VariantResolution { mismatch, consistent })
}

/// Scalar master theorem data at one x or λ.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalReport {
    /// (x, series f(x), contour (1/2πi)∫(−π/sin πλ) a(λ) x^λ dλ).
    pub reconstruction: Vec<(f64, Cx, Cx)>,
    /// (λ, ∫_0^∞ f(x) x^{−λ−1} dx, (−π/sin πλ) a(λ)).
    pub mellin: Vec<(Cx, Cx, Cx)>,
}

/// Scalar master theorem for f(x) = Σ (−1)^k a(k) x^k.
pub struct ClassicalMaster<'a> {
    pub a: &'a HardyFunction,
    /// Abscissa −η of the contour representation.
    pub eta: f64,
    pub tol: QuadTol,
    /// f(x) keyed by the bits of x; shared by all Mellin evaluations.
    f_cache: std::sync::Mutex<std::collections::HashMap<u64, Cx>>,
}

impl<'a> ClassicalMaster<'a> {
    pub fn new(a: &'a HardyFunction) -> Self {
        ClassicalMaster { a, eta: a.delta / 2.0, tol: QuadTol::new(1e-13, 1e-12), f_cache: Default::default() }
    }

    fn f_cached(&self, x: f64) -> Result<Cx> {
        if let Some(v) = self.f_cache.lock().expect("cache lock").get(&x.to_bits()) {
            return Ok(*v);
        }
        let v = self.f(x)?;
        self.f_cache.lock().expect("cache lock").insert(x.to_bits(), v);
        Ok(v)
    }

    fn mellin_kernel(&self, l: Cx) -> Result<Cx> {
        let s = sin_pi(l);
        if s.norm() < 1e-15 {
            return Err(Error::Pole { at: l });
        }
        Ok(-PI / s * self.a.eval(l))
    }

    /// Series value, certified with ratio x e^{−p}.
    pub fn series(&self, x: f64) -> Result<Cx> {
        self.series_from(x, 0)
    }

    /// Σ_{k ≥ k0} (−1)^k a(k) x^k; k0 = 1 gives f(x) − a(0) without
    /// cancellation near x = 0.
    pub fn series_from(&self, x: f64, k0: usize) -> Result<Cx> {
        let r = x * (-self.a.p).exp();
        let bound = TailBound::geometric(self.a.constant * r.powi(k0 as i32), r);
        let a = self.a;
        let scale = x.powi(k0 as i32).max(f64::MIN_POSITIVE);
        Ok(sum_series_with_tail(
            |j| {
                let k = j + k0;
                Ok(neg_one_pow(k as i64) * a.eval(Cx::new(k as f64, 0.0)) * x.powi(k as i32))
            },
            bound,
            1e-15 * scale,
            100_000,
        )?
        .value)
    }

    /// (1/2πi) ∫_{Re λ = −η'} (−π/sin πλ) a(λ) x^λ dλ with decay rate π − A.
    pub fn contour(&self, x: f64, eta: f64) -> Result<Cx> {
        if !(eta > 0.0 && eta < self.a.delta.min(1.0)) {
            return Err(Error::domain(format!("eta = {eta} outside (0, min(delta, 1))")));
        }
        let lx = x.ln();
        let rate = PI - self.a.growth;
        let err = std::cell::Cell::new(None);
        let f = |l: Cx| match self.mellin_kernel(l) {
            Ok(v) => v * (l * lx).exp(),
            Err(e) => {
                err.set(Some(e));
                Cx::new(0.0, 0.0)
            }
        };
        let cert = DecayCertificate::fitted(|y| f(Cx::new(-eta, y)), rate, 1.0, &[2.0, 4.0, 8.0, 16.0]);
        let line = integrate_vertical_line(f, -eta, self.tol, cert)?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok(line.value / (2.0 * PI * i()))
    }

    /// f(x) by the series where it converges quickly, the contour elsewhere.
    pub fn f(&self, x: f64) -> Result<Cx> {
        if x * (-self.a.p).exp() <= 0.5 {
            self.series(x)
        } else {
            self.contour(x, 0.9 * self.a.delta.min(1.0))
        }
    }

    /// ∫_0^∞ f(x) x^{−λ−1} dx for 0 < Re λ < min(δ, 1), continued across the
    /// a(0) term: ∫_0^1 (f − a(0)) x^{−λ−1} dx − a(0)/λ + ∫_1^∞ f x^{−λ−1} dx.
    /// Both pieces run in u = ∓ln x with certified exponential tails.
    pub fn mellin(&self, lambda: Cx) -> Result<Cx> {
        let lim = self.a.delta.min(1.0);
        if !(lambda.re > 0.0 && lambda.re < lim) {
            return Err(Error::domain(format!("Re lambda = {} outside (0, {lim})", lambda.re)));
        }
        let a0 = self.a.eval(Cx::new(0.0, 0.0));
        // |f(x) − a(0)| ≤ 2 C x on x ≤ 1/2 (ratio x e^{−p} ≤ 1/2); rate 1 − Re λ
        let lower_rate = 1.0 - lambda.re;
        let lower_c = 4.0 * self.a.constant * (-self.a.p).exp().max(0.5) * 2.0;
        let lower_end = ((lower_c / (lower_rate * self.tol.abs * 0.1)).ln() / lower_rate).max(2.0);
        // |f(x)| ≤ C_f x^{−η'} for x ≥ 1 from the contour at −η'
        let eta_far = 0.9 * lim;
        // the slowest rate over the strip, so every λ shares the cached nodes
        let upper_rate = eta_far;
        let cf = self.contour_abs_bound(eta_far)?;
        let upper_end = ((cf / (upper_rate * self.tol.abs * 0.1)).ln() / upper_rate).max(2.0);
        let err = std::cell::Cell::new(None);
        let catch = |r: Result<Cx>| match r {
            Ok(v) => v,
            Err(e) => {
                err.set(Some(e));
                Cx::new(0.0, 0.0)
            }
        };
        let lower = crate::quad::integrate_panels(
            |u| {
                let x = (-u).exp();
                let head = if x * (-self.a.p).exp() <= 0.5 { self.series_from(x, 1) } else { self.f(x).map(|fx| fx - a0) };
                catch(head.map(|d| d * (lambda * u).exp()))
            },
            &panel_breaks(lower_end),
            self.tol,
        )?;
        let upper = crate::quad::integrate_panels(
            |u| {
                let x = u.exp();
                catch(self.f_cached(x).map(|fx| fx * (-lambda * u).exp()))
            },
            &panel_breaks(upper_end),
            self.tol,
        )?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok(lower.value - a0 / lambda + upper.value)
    }

    /// (1/2π) ∫ |(−π/sin πλ) a(λ)| |dλ| on Re λ = −η, bounding |f(x)| x^{η}.
    fn contour_abs_bound(&self, eta: f64) -> Result<f64> {
        let f = |l: Cx| Cx::new(self.mellin_kernel(l).map(|v| v.norm()).unwrap_or(f64::INFINITY), 0.0);
        let rate = PI - self.a.growth;
        let cert = DecayCertificate::fitted(|y| f(Cx::new(-eta, y)), rate, 1.0, &[2.0, 4.0, 8.0, 16.0]);
        let h = cert.truncation_height(1e-6)?;
        let est = integrate_vertical_segment(&f, -eta, -h, h, QuadTol::new(1e-8, 1e-6))?;
        Ok(est.value.norm() / (2.0 * PI) + cert.tail(h))
    }

    /// Runs parts (2) and (3) on the given grids.
    pub fn report(&self, xs: &[f64], lambdas: &[Cx]) -> Result<ClassicalReport> {
        let reconstruction = crate::par::try_map(xs, |&x| -> Result<(f64, Cx, Cx)> {
            Ok((x, self.series(x)?, self.contour(x, self.eta)?))
        })?;
        let mellin = crate::par::try_map(lambdas, |&l| -> Result<(Cx, Cx, Cx)> {
            Ok((l, self.mellin(l)?, self.mellin_kernel(l)?))
        })?;
        Ok(ClassicalReport { reconstruction, mellin })
    }
}

fn panel_breaks(end: f64) -> Vec<f64> {
    let panels = (end / 0.5).ceil().max(1.0) as usize;
    (0..=panels).map(|j| end * j as f64 / panels as f64).collect()
}

/// Scalar master theorem on a grid.
pub fn classical_master(a: &HardyFunction, xs: &[f64], lambdas: &[Cx]) -> Result<ClassicalReport> {
    if a.growth >= PI {
        return Err(Error::domain("classical master theorem needs A < π"));
    }
    ClassicalMaster::new(a).report(xs, lambdas)
}

/// Outcome of the borderline probe.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub n: i64,
    /// max |series| over the t-grid.
    pub series_max: f64,
    /// (height Y, |(1/2)∫_{−iY}^{iY} S μ Φ dλ|) at t = 0.
    pub truncated: Vec<(f64, f64)>,
    /// Growth factor between the last and first heights.
    pub growth: f64,
    /// Series vanishes while truncated integrals keep growing.
    pub divergent_as_expected: bool,
}

/// Borderline data a(λ) = λ cos(πλ/2) (n even) or λ sin(πλ/2) (n odd): the
/// spectral series vanishes identically while the contour integral does
/// not exist; truncations grow without bound.
pub fn counterexample_probe(n: i64, ts: &[f64], heights: &[f64], kernel: Sl2Kernel) -> Result<CounterexampleReport> {
    let a = match Parity::of(n) {
        Parity::Even => HardyFunction::counterexample_cos(),
        Parity::Odd => HardyFunction::counterexample_sin(),
    };
    let m = MasterSl2::new(n, kernel);
    let mut series_max = 0.0f64;
    for &t in ts {
        // every coefficient vanishes; the tail certificate is irrelevant
        let mut s = Cx::new(0.0, 0.0);
        for j in 0..60usize {
            let mm = m.first_index() + j;
            let lam = 2 * mm as i64 + n + 1;
            if lam <= 0 {
                continue;
            }
            let av = a.eval(Cx::new(lam as f64, 0.0));
            if av != Cx::new(0.0, 0.0) {
                s += av * kernel.eval(Cx::new(lam as f64, 0.0), n, t)?;
            }
        }
        series_max = series_max.max(s.norm());
    }
    let truncated = heights
        .iter()
        .map(|&h| {
            let g = |l: Cx| m.line_integrand(&a, 0.0, l).unwrap_or(Cx::new(f64::NAN, f64::NAN));
            let v = integrate_vertical_segment(&g, 0.0, -h, h, QuadTol::new(1e-10, 1e-10))?;
            Ok((h, v.value.norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    let growth = match (truncated.first(), truncated.last()) {
        (Some(f), Some(l)) if f.1 > 0.0 => l.1 / f.1,
        _ => 0.0,
    };
    let divergent_as_expected = series_max <= 1e-12 && growth >= 10.0;
    Ok(CounterexampleReport { n, series_max, truncated, growth, divergent_as_expected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx;
    use crate::quad::residue_simple;
    use crate::sl2::plancherel_mu;

    fn kernel() -> Sl2Kernel {
        Sl2Kernel::validated(4).unwrap()
    }

    #[test]
    fn derived_constant_normalization() {
        for n in [2i64, 4, 6, -2, -4] {
            let c = BFactorSl2::new(n).c;
            // 4ci(−1)^{n/2} = −1 for the residue-matched choice
            assert!((4.0 * c * i() * neg_one_pow(n / 2) + 1.0).norm() < 1e-15);
        }
        // tabulated: 4ci(−1)^{n/2} = 1 for n even > 0
        for n in [2i64, 4, 6] {
            let c = BFactorSl2::printed(n).c;
            assert!((4.0 * c * i() * neg_one_pow(n / 2) - 1.0).norm() < 1e-15);
        }
        assert_eq!(BFactorSl2::printed(-2).c, BFactorSl2::new(-2).c);
        assert_eq!(BFactorSl2::printed(-3).c, BFactorSl2::new(-3).c);
        assert_eq!(BFactorSl2::printed(-4).c, -BFactorSl2::new(-4).c);
    }

    #[test]
    fn b_is_odd_for_even_n() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let b = BFactorSl2::new(2);
        for _ in 0..20 {
            let l = cx(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            assert!((b.b(l).unwrap() + b.b(-l).unwrap()).norm() < 1e-12 * b.b(l).unwrap().norm());
        }
    }

    #[test]
    fn b_times_mu_matches_closed_form() {
        for n in [2i64, 3, -2, -3] {
            let b = BFactorSl2::new(n);
            for l in [cx(0.3, 0.7), cx(-1.4, 2.0), cx(0.0, 5.0)] {
                let lhs = b.b(l).unwrap() * plancherel_mu(Parity::of(n), l).unwrap();
                assert!((lhs - b.b_mu(l).unwrap()).norm() < 1e-12 * lhs.norm(), "n={n} l={l}");
            }
        }
    }

    #[test]
    fn residues_of_b_mu() {
        for n in [2i64, 3] {
            let b = BFactorSl2::new(n);
            for p in b.poles_below(8.5) {
                let r = residue_simple(|l| b.b_mu(l).unwrap(), cx(p as f64, 0.0), 0.5, 1e-13).unwrap();
                assert!((r - b.residue_b_mu(p).unwrap()).norm() < 1e-11, "n={n} pole {p}");
            }
        }
    }

    #[test]
    fn b_mu_decays_on_imaginary_axis() {
        let b = BFactorSl2::new(2);
        for y in [1.0, 2.0, 5.0, 10.0, 20.0] {
            let l = cx(0.0, y);
            assert!(b.b_mu(l).unwrap().norm() <= y * (-PI / 2.0 * y).exp());
        }
    }

    #[test]
    fn sym_regular_at_zero() {
        let a = HardyFunction::exp(1.0);
        let b = BFactorSl2::new(2);
        let at0 = b.sym(&a, cx(0.0, 0.0)).unwrap();
        let near = b.sym(&a, cx(0.0, 0.02)).unwrap();
        assert!(at0.is_finite() && (at0 - near).norm() < 1e-2);
        // the mean-value branch agrees with the direct formula
        let direct = a.eval(cx(0.0, 0.009)) * b.b(cx(0.0, 0.009)).unwrap()
            + a.eval(cx(0.0, -0.009)) * b.b(cx(0.0, -0.009)).unwrap();
        assert!((b.sym(&a, cx(0.0, 0.009)).unwrap() - direct).norm() < 1e-10);
        for y in [0.1, 0.3, 0.5] {
            let l = cx(0.0, y);
            assert!((b.sym(&a, l).unwrap() - b.sym(&a, -l).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_data_gives_zero() {
        let zp = HardyFunction::new("zero", 0.0, 1.0, 1.0, 0.0, |_| cx(0.0, 0.0));
        let m = MasterSl2::new(2, kernel());
        let s = m.series(&zp, SeriesPoint::Cartan(CartanPoint::real(0.3)), 1e-10).unwrap();
        assert_eq!(s.value, cx(0.0, 0.0));
        let r = m.rectangle_residue_check(&zp, 0.2, 2).unwrap();
        assert_eq!(r.contour, cx(0.0, 0.0));
        assert_eq!(r.residue_sum, cx(0.0, 0.0));
    }

    #[test]
    fn series_terms_and_divergence() {
        let a = HardyFunction::exp(1.0);
        let m = MasterSl2::new(2, kernel());
        let s = m.series(&a, SeriesPoint::Cartan(CartanPoint::real(0.0)), 1e-8).unwrap();
        assert!(s.terms <= 60, "{s:?}");
        let e = m.series(&a, SeriesPoint::Cartan(CartanPoint::real(1.01)), 1e-8);
        assert!(matches!(e, Err(Error::Divergence(_))));
    }

    #[test]
    fn series_on_group_matches_cartan() {
        let a = HardyFunction::exp(1.0);
        let m = MasterSl2::new(2, kernel());
        let t = 0.35;
        let g = crate::su2::a_t(cx(t, 0.0));
        let x = m.series(&a, SeriesPoint::Group(g), 1e-12).unwrap().value;
        let y = m.series(&a, SeriesPoint::Cartan(CartanPoint::real(t)), 1e-12).unwrap().value;
        assert!((x - y).norm() < 1e-10 * y.norm(), "{x} {y}");
    }

    #[test]
    fn series_equals_contour_plus_discrete() {
        let a = HardyFunction::exp(1.0);
        for n in [1i64, 2, 3] {
            let m = MasterSl2::new(n, kernel());
            for t in [0.0, 0.4] {
                let s = m.series(&a, SeriesPoint::Cartan(CartanPoint::real(t)), 1e-13).unwrap().value;
                let c = m.contour_rhs(&a, t, 0.0).unwrap();
                assert!((s - c).norm() <= 1e-7 * s.norm(), "n={n} t={t}: {s} vs {c}");
            }
        }
    }

    #[test]
    fn printed_constant_flips_contour_side() {
        let a = HardyFunction::exp(1.0);
        let mut m = MasterSl2::new(2, kernel());
        let t = 0.3;
        let s = m.series(&a, SeriesPoint::Cartan(CartanPoint::real(t)), 1e-13).unwrap().value;
        m.bfac = BFactorSl2::printed(2);
        let c = m.contour_integral(&a, t, 0.0).unwrap();
        let d = m.discrete_part(&a, t).unwrap();
        assert!((c - (d - s)).norm() < 1e-7 * s.norm());
    }

    #[test]
    fn eta_invariance() {
        let a = HardyFunction::exp(1.0);
        let m = MasterSl2::new(2, kernel());
        let v0 = m.contour_integral(&a, 0.3, 0.0).unwrap();
        for eta in [0.25, 0.5] {
            let v = m.contour_integral(&a, 0.3, eta).unwrap();
            assert!((v - v0).norm() < 1e-9, "eta={eta}");
        }
        assert!(m.contour_integral(&a, 0.3, 1.0).is_err());
    }

    #[test]
    fn negative_n_weighted_variant_is_the_consistent_one() {
        let a = HardyFunction::exp(1.0);
        let r = resolve_series_variant(&a, -2, kernel(), &[0.0, 0.4], 1e-6).unwrap();
        assert_eq!(r.consistent, vec![SeriesVariant::Weighted], "{r:?}");
    }

    #[test]
    fn rectangle_residues() {
        let a = HardyFunction::exp(1.0);
        let m = MasterSl2::new(2, kernel());
        let r2 = m.rectangle_residue_check(&a, 0.0, 2).unwrap();
        assert!((r2.contour - r2.residue_sum).norm() < 1e-8, "{r2:?}");
        let r3 = m.rectangle_residue_check(&a, 0.0, 3).unwrap();
        let r4 = m.rectangle_residue_check(&a, 0.0, 4).unwrap();
        assert!(r4.edge_abs[2] < r3.edge_abs[2] && r4.edge_abs[1] < r3.edge_abs[1]);
    }

    #[test]
    fn counterexample_diverges() {
        let r = counterexample_probe(2, &[0.0, 0.3], &[10.0, 30.0], kernel()).unwrap();
        assert!(r.divergent_as_expected, "{r:?}");
        let r = counterexample_probe(1, &[0.0, 0.3], &[10.0, 30.0], kernel()).unwrap();
        assert!(r.divergent_as_expected, "{r:?}");
    }

    #[test]
    fn classical_gamma_reciprocal() {
        let a = HardyFunction::gamma_reciprocal();
        let rep = classical_master(&a, &[0.5, 2.0], &[cx(0.25, 1.0), cx(0.4, -2.0), cx(0.4, 0.0)]).unwrap();
        for (x, s, c) in &rep.reconstruction {
            assert!((s - c).norm() < 1e-9, "x={x}");
            assert!((s.re - (-x).exp()).abs() < 1e-12);
        }
        for (l, m, want) in &rep.mellin {
            // Γ(−λ) by reflection
            let g = crate::special_fn::gamma(-l).unwrap();
            assert!((want - g).norm() < 1e-10 * g.norm());
            assert!((m - want).norm() < 1e-7, "lambda={l}: {m} vs {want}");
        }
    }

    #[test]
    fn classical_constant() {
        let k = 2.0;
        let a = HardyFunction::constant_fn(k);
        let cm = ClassicalMaster::new(&a);
        for x in [0.5, 2.0, 5.0] {
            assert!((cm.f(x).unwrap().re - k / (1.0 + x)).abs() < 1e-9, "x={x}");
        }
        let l = cx(0.3, 0.5);
        let m = cm.mellin(l).unwrap();
        assert!((m + k * PI / sin_pi(l)).norm() < 1e-7, "{m}");
    }

    #[test]
    fn transform_identity_n2() {
        let a = HardyFunction::exp(1.0);
        let m = MasterSl2::new(2, kernel());
        let r = m.transform_identity_check(&a, &[cx(0.0, 0.5), cx(0.0, 1.0)]).unwrap();
        for (l, (x, y)) in r.lambdas.iter().zip(r.lhs.iter().zip(&r.rhs)) {
            assert!((x - y).norm() <= 1e-5 * y.norm(), "lambda={l}: {x} vs {y}");
        }
        for (k, got, want) in &r.discrete {
            assert!((got - want).norm() <= 1e-5 * want.norm(), "k={k}: {got} vs {want}");
        }
    }
}

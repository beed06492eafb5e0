//! Spherical analysis of (n,n)-type functions on SL(2,R): Iwasawa
//! coordinates, principal-series coefficients Φ^{n,n}_λ on a complex strip
//! around A, discrete-series coefficients Ψ_k, the Plancherel density and the
//! spherical transform pair.
//!
//! The reference for Φ is the K-integral
//!
//! ```text
//! Φ^{n,n}_λ(a_τ) = (1/2π) ∫_0^{2π} (cosh τ − sinh τ e^{iφ})^n
//!                          (cosh 2τ − sinh 2τ cos φ)^{−(λ+1+n)/2} dφ,
//! ```
//!
//! valid for n ≥ 0 and complex τ = t + is with |s| ≤ 0.3 (the base of the
//! power stays in the sector |arg| ≤ 2|s|). Negative n goes through
//! Φ^{n,n}_λ(a_{t+is}) = conj Φ^{−n,−n}_{λ̄}(a_{t−is}).

use crate::error::{Error, Result};
use crate::profile::{FnProfile, Memo, ProfileDecay, RadialProfile};
use crate::quad::{integrate_panels, integrate_vertical_line, DecayCertificate, QuadTol};
use crate::special_fn::{cos_pi, hyp2f1, sin_pi};
use crate::su2::{check_sl2c, Mat2};
use crate::Cx;
use std::f64::consts::PI;

/// Working strip half-width for complex Cartan points.
pub const STRIP: f64 = 0.3;

/// Parity class σ of the K-type: σ⁺ for even n, σ⁻ for odd n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "+",
            Parity::Odd => "-",
        })
    }
}

/// L^{n,n}: integers k of parity opposite to n with 0 < k < n or n < k < 0.
pub fn discrete_spectrum(n: i64) -> Vec<i64> {
    let (lo, hi) = if n > 0 { (1, n - 1) } else { (n + 1, -1) };
    (lo..=hi).filter(|k| (k - n).rem_euclid(2) == 1).collect()
}

/// The point a_{t+is}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartanPoint {
    pub t: f64,
    pub s: f64,
}

impl CartanPoint {
    pub fn real(t: f64) -> Self {
        CartanPoint { t, s: 0.0 }
    }

    pub fn new(t: f64, s: f64) -> Result<Self> {
        if s.abs() > STRIP + 1e-12 {
            return Err(Error::domain(format!("|s| = {} outside strip {STRIP}", s.abs())));
        }
        Ok(CartanPoint { t, s })
    }

    pub fn tau(&self) -> Cx {
        Cx::new(self.t, self.s)
    }
}

/// x = k_θ a_t n_ξ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iwasawa {
    pub theta: f64,
    pub t: f64,
    pub xi: f64,
}

impl Iwasawa {
    pub fn reconstruct(&self) -> Mat2 {
        use crate::su2::{a_t, k_theta, n_xi};
        k_theta(Cx::new(self.theta, 0.0)) * a_t(Cx::new(self.t, 0.0)) * n_xi(Cx::new(self.xi, 0.0))
    }
}

/// Iwasawa coordinates of a real determinant-one matrix:
/// e^{2t} = a²+c², e^{iθ} = (a−ic)/√(a²+c²), ξ = (ab+cd)/(a²+c²).
pub fn iwasawa_sl2(x: &Mat2) -> Result<Iwasawa> {
    check_sl2c(x)?;
    if x.iter().any(|z| z.im.abs() > 1e-14 * (1.0 + z.re.abs())) {
        return Err(Error::NotInGroup("iwasawa_sl2: matrix is not real".into()));
    }
    let (a, b, c, d) = (x[(0, 0)].re, x[(0, 1)].re, x[(1, 0)].re, x[(1, 1)].re);
    let r2 = a * a + c * c;
    Ok(Iwasawa { theta: (-c).atan2(a), t: 0.5 * r2.ln(), xi: (a * b + c * d) / r2 })
}

fn k_integral_nonneg(lambda: Cx, n: u32, tau: Cx, tol: QuadTol) -> Result<Cx> {
    let (em, sh) = ((-tau).exp(), tau.sinh());
    let (em2, sh2) = ((-2.0 * tau).exp(), (2.0 * tau).sinh());
    let expo = -(lambda + 1.0 + n as f64) / 2.0;
    // cosh − sinh·e^{±iφ} and cosh 2τ − sinh 2τ·cos φ rewritten without
    // cancellation near φ = 0
    let f = |phi: f64| -> Cx {
        let h = (0.5 * phi).sin();
        let q = Cx::from_polar(2.0 * h, 0.5 * phi) * Cx::i();
        let p = (em - sh * q).powu(n) + (em - sh * q.conj()).powu(n);
        let d = em2 + 2.0 * sh2 * h * h;
        p * (expo * d.ln()).exp()
    };
    // the integrand peaks within ~e^{-2|t|} of φ = 0 (t > 0) or φ = π (t < 0)
    let w = (-2.0 * tau.re.abs()).exp();
    let mut breaks = vec![0.0];
    let mut x = w;
    while x < PI / 2.0 {
        breaks.push(x);
        x *= 4.0;
    }
    breaks.push(PI);
    if tau.re < 0.0 {
        breaks = breaks.iter().rev().map(|b| PI - b).collect();
    }
    let est = integrate_panels(f, &breaks, tol)?;
    Ok(est.value / (2.0 * PI))
}

/// Φ^{n,n}_λ(a_{t+is}) from the K-integral.
pub fn phi_nn(lambda: Cx, n: i64, p: CartanPoint) -> Result<Cx> {
    phi_nn_tol(lambda, n, p, QuadTol::new(1e-14, 1e-13))
}

/// [`phi_nn`] with explicit quadrature tolerance.
pub fn phi_nn_tol(lambda: Cx, n: i64, p: CartanPoint, tol: QuadTol) -> Result<Cx> {
    let p = CartanPoint::new(p.t, p.s)?;
    if n >= 0 {
        k_integral_nonneg(lambda, n as u32, p.tau(), tol)
    } else {
        Ok(k_integral_nonneg(lambda.conj(), (-n) as u32, p.tau().conj(), tol)?.conj())
    }
}

/// Φ^{n,n}_λ(x) straight from the principal-series definition
/// ∫_K e^{−(λ+1)H(x^{−1}k_θ)} e_n(K(x^{−1}k_θ)^{−1}k_θ) dk_θ, with H and K
/// from [`iwasawa_sl2`]. Slow; used to validate [`phi_nn`].
pub fn phi_nn_by_definition(lambda: Cx, n: i64, x: &Mat2) -> Result<Cx> {
    use crate::su2::{inv_sl2, k_theta};
    let xi = inv_sl2(x);
    iwasawa_sl2(&xi)?;
    let f = |th: f64| -> Cx {
        let y = xi * k_theta(Cx::new(th, 0.0));
        let iw = iwasawa_sl2(&y).expect("real product stays real");
        (-(lambda + 1.0) * iw.t).exp() * Cx::from_polar(1.0, n as f64 * (th - iw.theta))
    };
    let breaks: Vec<f64> = (0..=16).map(|k| 2.0 * PI * k as f64 / 16.0).collect();
    Ok(integrate_panels(f, &breaks, QuadTol::new(1e-13, 1e-12))?.value / (2.0 * PI))
}

/// Candidate closed forms (cosh t)^e · ₂F₁(a, b; 1; −sinh²t) for Φ^{n,n}_λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HypMapping {
    /// (cosh t)^{2n} ₂F₁(n+(1−λ)/2, n+(1−λ)/2; 1).
    Printed,
    /// (cosh t)^{2n} ₂F₁(n+(1−λ)/2, n+(1+λ)/2; 1), i.e. Jacobi (0, 2n).
    JacobiTwoN,
    /// (cosh t)^n ₂F₁((n+1−λ)/2, (n+1+λ)/2; 1), i.e. Jacobi (0, n).
    JacobiN,
}

impl HypMapping {
    pub const ALL: [HypMapping; 3] = [HypMapping::Printed, HypMapping::JacobiTwoN, HypMapping::JacobiN];

    pub fn name(&self) -> &'static str {
        match self {
            HypMapping::Printed => "cosh^{2n} F(n+(1-l)/2, n+(1-l)/2; 1)",
            HypMapping::JacobiTwoN => "cosh^{2n} F(n+(1-l)/2, n+(1+l)/2; 1)",
            HypMapping::JacobiN => "cosh^n F((n+1-l)/2, (n+1+l)/2; 1)",
        }
    }
}

/// Candidate closed form for Φ^{n,n}_λ(a_τ), n ≥ 0, complex τ in the strip.
pub fn phi_nn_hyp(lambda: Cx, n: u32, tau: Cx, mapping: HypMapping) -> Result<Cx> {
    let nf = n as f64;
    let one = Cx::new(1.0, 0.0);
    let sh = tau.sinh();
    let z = -sh * sh;
    let (pow, a, b) = match mapping {
        HypMapping::Printed => (2 * n, nf + (one - lambda) / 2.0, nf + (one - lambda) / 2.0),
        HypMapping::JacobiTwoN => (2 * n, nf + (one - lambda) / 2.0, nf + (one + lambda) / 2.0),
        HypMapping::JacobiN => (n, (nf + 1.0 - lambda) / 2.0, (nf + 1.0 + lambda) / 2.0),
    };
    Ok(tau.cosh().powu(pow) * hyp2f1(a, b, one, z)?)
}

/// Outcome of fitting one candidate mapping against the K-integral.
#[derive(Debug, Clone, PartialEq)]
pub struct MappingFit {
    pub mapping: HypMapping,
    pub max_abs_err: f64,
    pub accepted: bool,
}

/// Default validation grid: n ≤ 3, λ ∈ {2, 0.3+0.7i, 1.5i, 3.2}, t up to 2,
/// and one complex point.
pub fn validation_grid(max_n: u32) -> Vec<(u32, Cx, Cx)> {
    let lambdas = [Cx::new(2.0, 0.0), Cx::new(0.3, 0.7), Cx::new(0.0, 1.5), Cx::new(3.2, 0.0)];
    let taus = [Cx::new(0.3, 0.0), Cx::new(0.8, 0.0), Cx::new(2.0, 0.0), Cx::new(1.1, 0.2)];
    let mut out = Vec::new();
    for n in 0..=max_n {
        for &l in &lambdas {
            for &t in &taus {
                out.push((n, l, t));
            }
        }
    }
    out
}

/// Fit every candidate mapping on `grid` against [`phi_nn`]; a mapping is
/// accepted when its maximum error is at most 1e-10.
pub fn resolve_mapping(grid: &[(u32, Cx, Cx)]) -> Result<Vec<MappingFit>> {
    let refs = crate::par::try_map(grid, |&(n, l, t)| phi_nn(l, n as i64, CartanPoint::new(t.re, t.im)?))?;
    let mut fits = Vec::new();
    for m in HypMapping::ALL {
        let mut worst = 0.0f64;
        for (&(n, l, t), r) in grid.iter().zip(&refs) {
            let e = match phi_nn_hyp(l, n, t, m) {
                Ok(v) => (v - r).norm(),
                Err(_) => f64::INFINITY,
            };
            worst = worst.max(e);
        }
        fits.push(MappingFit { mapping: m, max_abs_err: worst, accepted: worst <= 1e-10 });
    }
    Ok(fits)
}

/// Evaluation route for Φ^{n,n}_λ(a_t) on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sl2Kernel {
    /// K-integral (reference).
    KIntegral,
    /// Hypergeometric form; only obtainable through [`Sl2Kernel::validated`].
    Hypergeometric(HypMapping),
}

impl Sl2Kernel {
    /// Returns the hypergeometric kernel for the first candidate mapping that
    /// validates on [`validation_grid`], or an error if none does.
    pub fn validated(max_n: u32) -> Result<Self> {
        let fits = resolve_mapping(&validation_grid(max_n))?;
        fits.iter()
            .find(|f| f.accepted)
            .map(|f| Sl2Kernel::Hypergeometric(f.mapping))
            .ok_or_else(|| Error::Invariant("no hypergeometric mapping validates".into()))
    }

    /// Φ^{n,n}_λ(a_t), real t. For n < 0 and real t, Φ^{n,n}_λ = Φ^{|n|,|n|}_λ
    /// for the hypergeometric route (real coefficients).
    pub fn eval(&self, lambda: Cx, n: i64, t: f64) -> Result<Cx> {
        match *self {
            Sl2Kernel::KIntegral => phi_nn(lambda, n, CartanPoint::real(t)),
            Sl2Kernel::Hypergeometric(m) => {
                match phi_nn_hyp(lambda, n.unsigned_abs() as u32, Cx::new(t, 0.0), m) {
                    // heavy cancellation in the series; the K-integral is benign there
                    Err(Error::Accuracy { .. }) => phi_nn(lambda, n, CartanPoint::real(t)),
                    r => r,
                }
            }
        }
    }
}

/// Ψ_k^{n,n}(a_t) = Φ^{n,n}_{|k|}(a_t) for k ∈ L^{n,n}.
pub fn psi_disc(k: i64, n: i64, t: f64) -> Result<Cx> {
    psi_disc_with(Sl2Kernel::KIntegral, k, n, t)
}

/// Ψ_k through `kernel`; the hypergeometric route uses [`psi_disc_closed`].
pub fn psi_disc_with(kernel: Sl2Kernel, k: i64, n: i64, t: f64) -> Result<Cx> {
    if !discrete_spectrum(n).contains(&k) {
        return Err(Error::domain(format!("k = {k} not in L for n = {n}")));
    }
    match kernel {
        Sl2Kernel::KIntegral => kernel.eval(Cx::new(k.unsigned_abs() as f64, 0.0), n, t),
        Sl2Kernel::Hypergeometric(_) => psi_disc_closed(k, n, t),
    }
}

/// Ψ_k^{n,n}(a_t) = (cosh t)^{−(|k|+1)} ₂F₁(1−a, b; 1; tanh²t) with
/// a = (|n|+1−|k|)/2, b = (|n|+1+|k|)/2. For k ∈ L the ₂F₁ is a polynomial of
/// degree a−1 in tanh²t ∈ [0, 1), so the value keeps full relative accuracy
/// as t grows, unlike the 1/z connection formula at integer b−a.
pub fn psi_disc_closed(k: i64, n: i64, t: f64) -> Result<Cx> {
    if !discrete_spectrum(n).contains(&k) {
        return Err(Error::domain(format!("k = {k} not in L for n = {n}")));
    }
    let (k, n) = (k.abs(), n.abs());
    let a = (n + 1 - k) / 2;
    let b = (n + 1 + k) / 2;
    let w = t.tanh().powi(2);
    // Σ_j (1−a)_j (b)_j / (j!)² w^j
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..(a - 1) {
        let j = j as f64;
        term *= (1.0 - a as f64 + j) * (b as f64 + j) / ((j + 1.0) * (j + 1.0)) * w;
        sum += term;
    }
    Ok(Cx::new(sum * t.cosh().powi(-(k as i32 + 1)), 0.0))
}

/// μ(σ⁺, λ) = (λπi/2) tan(πλ/2), μ(σ⁻, λ) = −(λπi/2) cot(πλ/2).
pub fn plancherel_mu(parity: Parity, lambda: Cx) -> Result<Cx> {
    let half = lambda / 2.0;
    let (s, c) = (sin_pi(half), cos_pi(half));
    let pref = lambda * Cx::new(0.0, PI / 2.0);
    match parity {
        Parity::Even => {
            if c.norm() < 1e-14 {
                return Err(Error::Pole { at: lambda });
            }
            Ok(pref * s / c)
        }
        Parity::Odd => {
            if lambda.norm() < 1e-8 {
                // λ cot(πλ/2) → 2/π
                return Ok(Cx::new(0.0, -1.0) * (1.0 - (PI * lambda).powu(2) / 12.0));
            }
            if s.norm() < 1e-14 {
                return Err(Error::Pole { at: lambda });
            }
            Ok(-pref * c / s)
        }
    }
}

/// Spherical transform pair for (n,n)-type profiles. `kappa` scales the
/// Haar measure κ·sinh 2t dk dt dk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2Transform {
    pub n: i64,
    pub kappa: f64,
    pub kernel: Sl2Kernel,
    pub tol: QuadTol,
}

impl Sl2Transform {
    pub fn new(n: i64, kappa: f64, kernel: Sl2Kernel) -> Self {
        Sl2Transform { n, kappa, kernel, tol: QuadTol::new(1e-12, 1e-10) }
    }

    fn radial_integral<F: Fn(f64) -> Result<Cx>>(&self, f: &dyn RadialProfile, phi: F, growth: f64) -> Result<Cx> {
        let decay = f
            .decay()
            .ok_or_else(|| Error::domain("profile has no decay certificate"))?;
        let end = decay.truncation(growth, self.tol.abs / 10.0)?;
        let panels = ((end / 0.5).ceil() as usize).max(1);
        let breaks: Vec<f64> = (0..=panels).map(|j| end * j as f64 / panels as f64).collect();
        let err = std::cell::Cell::new(None);
        let est = integrate_panels(
            |t| {
                let v = f.eval(t);
                if v == Cx::new(0.0, 0.0) {
                    return v;
                }
                match phi(t) {
                    Ok(p) => v * p * (2.0 * t).sinh(),
                    Err(e) => {
                        err.set(Some(e));
                        Cx::new(0.0, 0.0)
                    }
                }
            },
            &breaks,
            self.tol,
        )?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok(self.kappa * est.value)
    }

    /// f̂_H(λ) = κ ∫_0^∞ f(a_t) Φ^{n,n}_λ(a_t) sinh 2t dt.
    pub fn h(&self, f: &dyn RadialProfile, lambda: Cx) -> Result<Cx> {
        let growth = lambda.re.abs() + 1.1;
        self.radial_integral(f, |t| self.kernel.eval(lambda, self.n, t), growth)
    }

    /// f̂_B(k) = κ ∫_0^∞ f(a_t) Ψ_k^{n,n}(a_t) sinh 2t dt.
    pub fn b(&self, f: &dyn RadialProfile, k: i64) -> Result<Cx> {
        if !discrete_spectrum(self.n).contains(&k) {
            return Err(Error::domain(format!("k = {k} not in L for n = {}", self.n)));
        }
        self.radial_integral(f, |t| psi_disc_with(self.kernel, k, self.n, t), 1.1)
    }

    /// (1/4π²) ∫_{iR} f̂_H Φ μ dλ + (1/2π) Σ_k f̂_B(k) Ψ_k |k|. `cert` bounds
    /// |f̂_H(iy)|; |Φ| ≤ 1 and |μ(iy)| ≤ 2(1+|y|) are folded in.
    pub fn invert(
        &self,
        fh: &(dyn Fn(Cx) -> Cx + Sync),
        cert: DecayCertificate,
        fb: &[(i64, Cx)],
        t: f64,
    ) -> Result<Cx> {
        let parity = Parity::of(self.n);
        let full = DecayCertificate::new(2.0 * cert.constant, cert.rate, cert.degree + 1.0);
        let err = std::cell::Cell::new(None);
        let line = integrate_vertical_line(
            |l| {
                let g = fh(l);
                let v = self
                    .kernel
                    .eval(l, self.n, t)
                    .and_then(|p| Ok(p * plancherel_mu(parity, l)?));
                match v {
                    Ok(v) => g * v,
                    Err(e) => {
                        err.set(Some(e));
                        Cx::new(0.0, 0.0)
                    }
                }
            },
            0.0,
            self.tol,
            full,
        )?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        let mut out = line.value / (4.0 * PI * PI);
        for &(k, v) in fb {
            out += v * psi_disc_with(self.kernel, k, self.n, t)? * (k.abs() as f64) / (2.0 * PI);
        }
        Ok(out)
    }
}

/// Haar normalization found by the n = 0 round trip (see
/// [`calibrate_kappa`]); frozen for every n.
pub const KAPPA_SL2: f64 = 2.0 * PI;

/// Transform followed by inversion on a t-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrip {
    pub ts: Vec<f64>,
    pub original: Vec<Cx>,
    pub recovered: Vec<Cx>,
    /// max |recovered − original| / max |original|.
    pub max_rel_err: f64,
}

fn rel_linf(a: &[Cx], b: &[Cx]) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let err = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        err
    } else {
        err / scale
    }
}

/// Inverts the transform of `f` at each t. f̂_H is memoized across t and
/// its decay along iR is fitted from samples.
pub fn round_trip(tr: &Sl2Transform, f: &dyn RadialProfile, ts: &[f64]) -> Result<RoundTrip> {
    let first_err = std::sync::Mutex::new(None);
    let memo = Memo::new(|l: Cx| match tr.h(f, l) {
        Ok(v) => v,
        Err(e) => {
            first_err.lock().expect("error slot").get_or_insert(e);
            Cx::new(0.0, 0.0)
        }
    });
    let cert = DecayCertificate::fitted(|y| memo.get(Cx::new(0.0, y)), 1.0, 0.0, &[1.0, 2.0, 4.0, 8.0]);
    let fb = discrete_spectrum(tr.n)
        .into_iter()
        .map(|k| Ok((k, tr.b(f, k)?)))
        .collect::<Result<Vec<_>>>()?;
    let recovered = crate::par::try_map(ts, |&t| tr.invert(&|l| memo.get(l), cert, &fb, t))?;
    if let Some(e) = first_err.into_inner().expect("error slot") {
        return Err(e);
    }
    let original: Vec<Cx> = ts.iter().map(|&t| f.eval(t)).collect();
    let max_rel_err = rel_linf(&recovered, &original);
    Ok(RoundTrip { ts: ts.to_vec(), original, recovered, max_rel_err })
}

/// Result of the n = 0 Haar calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaCalibration {
    pub kappa: f64,
    /// The frozen value [`KAPPA_SL2`].
    pub frozen: f64,
    /// Round-trip error on the whole t-grid with the calibrated κ.
    pub max_rel_err: f64,
}

/// Fixes κ from the n = 0 round trip of e^{−2t²} at t = 0.5, then checks
/// the same κ on the rest of the t-grid.
pub fn calibrate_kappa(kernel: Sl2Kernel) -> Result<KappaCalibration> {
    let f = FnProfile::new(|t: f64| Cx::new((-2.0 * t * t).exp(), 0.0), ProfileDecay::Gaussian { constant: 1.0, alpha: 2.0 });
    let unit = Sl2Transform::new(0, 1.0, kernel);
    let ts = [0.5, 0.0, 0.25, 1.0, 1.5];
    let rt = round_trip(&unit, &f, &ts)?;
    let kappa = rt.original[0].re / rt.recovered[0].re;
    let scaled: Vec<Cx> = rt.recovered.iter().map(|z| z * kappa).collect();
    Ok(KappaCalibration { kappa, frozen: KAPPA_SL2, max_rel_err: rel_linf(&scaled, &rt.original) })
}

/// Smallest constant that makes a bound hold on a finite grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConstant {
    pub constant: f64,
    /// Grid point where the constant is attained.
    pub worst: String,
    pub samples: usize,
}

fn grid_constant(samples: Vec<(f64, String)>) -> GridConstant {
    let n = samples.len();
    let (constant, worst) = samples
        .into_iter()
        .fold((0.0, String::new()), |acc, (c, w)| if c > acc.0 || c.is_nan() { (c, w) } else { acc });
    GridConstant { constant, worst, samples: n }
}

/// Spectral grid {0, ±0.5, ±1} × {0, ±i} used by the bound certificates.
pub fn bound_lambda_grid() -> Vec<Cx> {
    let mut out = Vec::new();
    for re in [0.0, 0.5, -0.5, 1.0, -1.0] {
        for im in [0.0, 1.0, -1.0] {
            out.push(Cx::new(re, im));
        }
    }
    out
}

/// Grid constant for |Φ^{n,n}_λ(a_t)| ≤ C (1+t) e^{(|Re λ|−1)t}, t ∈ [0, 3].
pub fn growth_certificate(ns: &[i64]) -> Result<GridConstant> {
    let mut pts = Vec::new();
    for &n in ns {
        for l in bound_lambda_grid() {
            for j in 0..=12 {
                pts.push((n, l, 0.25 * j as f64));
            }
        }
    }
    let vals = crate::par::try_map(&pts, |&(n, l, t)| -> Result<(f64, String)> {
        let v = phi_nn(l, n, CartanPoint::real(t))?.norm();
        let c = v / ((1.0 + t) * ((l.re.abs() - 1.0) * t).exp());
        Ok((c, format!("n={n} lambda={l} t={t}")))
    })?;
    Ok(grid_constant(vals))
}

/// Grid constant for |Φ^{n,n}_{λ₁+iλ₂}(a_{t+is})| ≤ C e^{2|n||t|} e^{|λ₁||t| + |λ₂||s|},
/// t ∈ [0, 3], |s| ≤ 0.25.
pub fn strip_certificate(ns: &[i64]) -> Result<GridConstant> {
    let mut pts = Vec::new();
    for &n in ns {
        for l in bound_lambda_grid() {
            for j in 0..=6 {
                for s in [0.0, 0.125, -0.125, 0.25, -0.25] {
                    pts.push((n, l, 0.5 * j as f64, s));
                }
            }
        }
    }
    let vals = crate::par::try_map(&pts, |&(n, l, t, s)| -> Result<(f64, String)> {
        let v = phi_nn(l, n, CartanPoint::new(t, s)?)?.norm();
        let env = (2.0 * n.abs() as f64 * t + l.re.abs() * t + l.im.abs() * s.abs()).exp();
        Ok((v / env, format!("n={n} lambda={l} t={t} s={s}")))
    })?;
    Ok(grid_constant(vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx;
    use crate::su2::{a_t, k_theta, n_xi, psi_exact};

    #[test]
    fn spectrum_sets() {
        assert_eq!(discrete_spectrum(4), vec![1, 3]);
        assert_eq!(discrete_spectrum(3), vec![2]);
        assert_eq!(discrete_spectrum(-3), vec![-2]);
        assert_eq!(discrete_spectrum(-4), vec![-3, -1]);
        assert!(discrete_spectrum(1).is_empty() && discrete_spectrum(0).is_empty() && discrete_spectrum(-1).is_empty());
    }

    #[test]
    fn iwasawa_examples() {
        let i = iwasawa_sl2(&a_t(cx(0.4, 0.0))).unwrap();
        assert!((i.theta).abs() < 1e-15 && (i.t - 0.4).abs() < 1e-15 && i.xi.abs() < 1e-15);
        let i = iwasawa_sl2(&k_theta(cx(1.1, 0.0))).unwrap();
        assert!((i.theta - 1.1).abs() < 1e-15 && i.t.abs() < 1e-15 && i.xi.abs() < 1e-15);
        let i = iwasawa_sl2(&n_xi(cx(-0.7, 0.0))).unwrap();
        assert!(i.theta.abs() < 1e-15 && i.t.abs() < 1e-15 && (i.xi + 0.7).abs() < 1e-15);
        let x = k_theta(cx(2.5, 0.0)) * a_t(cx(-0.3, 0.0)) * n_xi(cx(1.7, 0.0));
        let r = iwasawa_sl2(&x).unwrap().reconstruct();
        assert!((r - x).iter().all(|z| z.norm() < 1e-12));
        assert!(iwasawa_sl2(&a_t(cx(0.1, 0.1))).is_err());
    }

    #[test]
    fn phi_examples() {
        assert!((phi_nn(cx(0.7, 0.3), 0, CartanPoint::real(0.0)).unwrap() - 1.0).norm() < 1e-13);
        let v = phi_nn(cx(2.0, 0.0), 1, CartanPoint::real(0.5)).unwrap();
        assert!((v - 0.5f64.cosh()).norm() < 1e-12);
        let a = phi_nn(cx(0.0, 0.8), 2, CartanPoint::real(1.0)).unwrap();
        let b = phi_nn(cx(0.0, -0.8), 2, CartanPoint::real(1.0)).unwrap();
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn k_integral_matches_definition() {
        for &n in &[0i64, 1, 2, -1, -2] {
            for &l in &[cx(0.0, 1.3), cx(0.4, -0.2), cx(2.0, 0.0)] {
                for &t in &[0.3, -0.9, 1.6] {
                    let a = phi_nn(l, n, CartanPoint::real(t)).unwrap();
                    let b = phi_nn_by_definition(l, n, &a_t(cx(t, 0.0))).unwrap();
                    assert!((a - b).norm() < 1e-10, "n={n} l={l} t={t}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn type_nn_on_group() {
        // Φ(k_θ a_t k_φ) = e^{inθ} Φ(a_t) e^{inφ} through the definition
        let (n, l, t) = (2i64, cx(0.3, 0.9), 0.7);
        let (th, ph) = (0.4, -1.2);
        let x = k_theta(cx(th, 0.0)) * a_t(cx(t, 0.0)) * k_theta(cx(ph, 0.0));
        let a = phi_nn_by_definition(l, n, &x).unwrap();
        let b = phi_nn(l, n, CartanPoint::real(t)).unwrap() * Cx::from_polar(1.0, n as f64 * (th + ph));
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn oracle_agreement() {
        for n in 0..4i64 {
            for m in 0..4usize {
                for j in 0..=8 {
                    let t = 0.25 * j as f64;
                    let a = phi_nn(cx((2 * m as i64 + n + 1) as f64, 0.0), n, CartanPoint::real(t)).unwrap();
                    let b = psi_exact(m, n, &a_t(cx(t, 0.0))).unwrap();
                    assert!((a - b).norm() <= 1e-9 * b.norm().max(1.0), "n={n} m={m} t={t}");
                }
            }
        }
    }

    #[test]
    fn conjugation_symmetry() {
        for &(l, n, t, s) in &[(cx(0.5, 1.0), 2i64, 0.8, 0.2), (cx(-0.3, 2.0), 1, -1.2, -0.25), (cx(1.0, 0.0), 3, 2.0, 0.1)] {
            let a = phi_nn(l, n, CartanPoint::new(t, s).unwrap()).unwrap().conj();
            let b = phi_nn(l.conj(), -n, CartanPoint::new(t, -s).unwrap()).unwrap();
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn strip_enforced() {
        assert!(phi_nn(cx(1.0, 0.0), 0, CartanPoint { t: 0.0, s: 0.31 }).is_err());
    }

    #[test]
    fn hyp_mapping_resolution() {
        let fits = resolve_mapping(&validation_grid(3)).unwrap();
        let ok: Vec<_> = fits.iter().filter(|f| f.accepted).map(|f| f.mapping).collect();
        assert_eq!(ok, vec![HypMapping::JacobiN]);
        for m in HypMapping::ALL {
            assert!((phi_nn_hyp(cx(0.4, 1.0), 2, cx(0.0, 0.0), m).unwrap() - 1.0).norm() < 1e-15);
        }
        let printed = phi_nn_hyp(cx(2.0, 0.0), 1, cx(0.5, 0.0), HypMapping::JacobiTwoN).unwrap();
        assert!((printed - 0.5f64.cosh()).norm() > 0.1);
    }

    #[test]
    fn hyp_kernel_far_field() {
        // the validated mapping keeps agreeing on the imaginary axis at large t
        let k = Sl2Kernel::Hypergeometric(HypMapping::JacobiN);
        for n in [0i64, 1, 2, 3, -2] {
            for &y in &[1e-3, 0.5, 5.0, 20.0, 40.0] {
                for &t in &[3.0, 6.0, 10.0] {
                    let l = cx(0.0, y);
                    let a = k.eval(l, n, t).unwrap();
                    let b = Sl2Kernel::KIntegral.eval(l, n, t).unwrap();
                    let scale = (1.0 + t) * (-t).exp();
                    assert!((a - b).norm() < 1e-10 * scale, "n={n} y={y} t={t}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn plancherel_values() {
        assert_eq!(plancherel_mu(Parity::Even, cx(0.0, 0.0)).unwrap(), cx(0.0, 0.0));
        let v = plancherel_mu(Parity::Even, cx(0.0, 2.0)).unwrap();
        assert!((v - cx(0.0, -PI * PI.tanh())).norm() < 1e-13);
        assert!(plancherel_mu(Parity::Odd, cx(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(matches!(plancherel_mu(Parity::Even, cx(3.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(plancherel_mu(Parity::Odd, cx(2.0, 0.0)), Err(Error::Pole { .. })));
        let near = plancherel_mu(Parity::Odd, cx(1e-9, 0.0)).unwrap();
        let off = plancherel_mu(Parity::Odd, cx(1e-3, 0.0)).unwrap();
        assert!((near - off).norm() < 1e-5);
    }

    #[test]
    fn psi_disc_membership() {
        assert!(psi_disc(2, 2, 0.3).is_err());
        assert!((psi_disc(1, 2, 0.0).unwrap() - 1.0).norm() < 1e-13);
        let a = psi_disc(1, 2, 0.5).unwrap();
        assert!((a - phi_nn(cx(1.0, 0.0), 2, CartanPoint::real(0.5)).unwrap()).norm() < 1e-15);
        // Ψ_1^{2,2}(a_t) = cosh^{-2} t
        assert!((a - 1.0 / 0.5f64.cosh().powi(2)).norm() < 1e-12);
    }

    #[test]
    fn kappa_calibration_and_round_trips() {
        let kernel = Sl2Kernel::validated(4).unwrap();
        let cal = calibrate_kappa(kernel).unwrap();
        assert!((cal.kappa - KAPPA_SL2).abs() < 1e-6 * KAPPA_SL2, "{cal:?}");
        assert!(cal.max_rel_err < 1e-4, "{cal:?}");
        let ts = [0.0, 0.3, 0.7, 1.2];
        for n in [2i64, 3, -2] {
            let f = FnProfile::new(
                |t: f64| Cx::new((-1.5 * t * t).exp(), 0.0),
                ProfileDecay::Gaussian { constant: 1.0, alpha: 1.5 },
            );
            let rt = round_trip(&Sl2Transform::new(n, KAPPA_SL2, kernel), &f, &ts).unwrap();
            assert!(rt.max_rel_err < 1e-4, "n={n}: {rt:?}");
        }
    }

    #[test]
    fn zero_profile_transforms_to_zero() {
        let f = FnProfile::new(|_| Cx::new(0.0, 0.0), ProfileDecay::Support { end: 1.0 });
        let tr = Sl2Transform::new(2, KAPPA_SL2, Sl2Kernel::KIntegral);
        assert_eq!(tr.h(&f, cx(0.0, 0.5)).unwrap(), cx(0.0, 0.0));
        assert_eq!(tr.b(&f, 1).unwrap(), cx(0.0, 0.0));
        let z = tr.invert(&|_| cx(0.0, 0.0), DecayCertificate::new(0.0, 1.0, 0.0), &[(1, cx(0.0, 0.0))], 0.4);
        assert_eq!(z.unwrap(), cx(0.0, 0.0));
        let uncertified = FnProfile::uncertified(|_| cx(1.0, 0.0));
        assert!(tr.h(&uncertified, cx(0.0, 1.0)).is_err());
    }

    #[test]
    fn transform_even_in_lambda() {
        let f = FnProfile::new(|t: f64| cx((-t * t).exp(), 0.0), ProfileDecay::Gaussian { constant: 1.0, alpha: 1.0 });
        let tr = Sl2Transform::new(2, KAPPA_SL2, Sl2Kernel::KIntegral);
        let a = tr.h(&f, cx(0.3, 0.8)).unwrap();
        let b = tr.h(&f, cx(-0.3, -0.8)).unwrap();
        assert!((a - b).norm() < 1e-9 * a.norm());
    }

    #[test]
    fn bound_certificates() {
        let g = growth_certificate(&[0, 1, -1, 2, -2]).unwrap();
        assert!(g.constant.is_finite() && g.constant <= 10.0, "{g:?}");
        let s = strip_certificate(&[0, 1, -1, 2, -2]).unwrap();
        assert!(s.constant.is_finite() && s.constant <= 10.0, "{s:?}");
    }

    #[test]
    fn discrete_closed_form() {
        for n in [1i64, 2, 3, 4, 5, 6, -3, -4] {
            for k in discrete_spectrum(n) {
                for t in [0.0, 0.3, 1.0, 2.5] {
                    let a = psi_disc_closed(k, n, t).unwrap();
                    let l = cx(k.abs() as f64, 0.0);
                    let b = phi_nn_tol(l, n, CartanPoint::real(t), QuadTol::new(1e-17, 1e-14)).unwrap();
                    // roundoff floor of the K-integral: its integrand is of size cosh^{|n|} t
                    let floor = 1e-15 * t.cosh().powi(n.abs() as i32);
                    assert!((a - b).norm() <= 1e-10 * b.norm() + floor, "n={n} k={k} t={t}: {a} {b}");
                }
            }
        }
        // n = 2, k = 1: sech²t exactly, far out
        let t = 30.0;
        let v = psi_disc_closed(1, 2, t).unwrap().re;
        assert!((v * t.cosh().powi(2) - 1.0).abs() < 1e-14);
    }
}

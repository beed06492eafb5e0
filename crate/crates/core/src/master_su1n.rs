//! Master theorem for χ_l-spherical functions on SU(1,n), |l| < n: the
//! interpolating factor b(λ) in the four parity cases, the spectral series,
//! its contour representation, the transform identity, residue bookkeeping
//! and the borderline counterexample.
//!
//! Everything is expressed through B(λ) = b(λ)/(c(λ)c(−λ)) with
//! c = c(·, m₊(l)). Matching residues against the series coefficients fixes
//!
//! ```text
//! B(λ) = (i/8) α p(λ)/p(n+|l|) / sin(π(λ−n−|l|)/2)
//! ```
//!
//! in all four cases, with p the corrected polynomial and α the dimension of
//! the m = 0 representation. [`BFactorChi::printed`] keeps the tabulated
//! (∓i/4) constants and polynomials for comparison.

use crate::error::{Error, Result};
use crate::hardy::HardyFunction;
use crate::master_sl2::SeriesValue;
use crate::profile::{ProfileDecay, RadialProfile, SampledProfile};
use crate::quad::{
    integrate_vertical_line, integrate_vertical_segment, residue_checked, sum_series_with_tail, DecayCertificate, QuadTol,
    TailBound,
};
use crate::special_fn::{cos_pi, gamma, sin_pi};
use crate::su1n::{
    c_product_inv, gamma_pq, kappa_chi_analytic, phi_chi_l, weyl_dim_oracle, CProductParts, ChiParam, PTable,
    Su1nTransform,
};
use crate::Cx;
use std::f64::consts::PI;

fn neg_one_pow(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Parities of (n, |l|).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityCase {
    OddEven,
    EvenEven,
    OddOdd,
    EvenOdd,
}

impl ParityCase {
    pub fn of(param: ChiParam) -> Self {
        match (param.n % 2, param.big_l() % 2) {
            (1, 0) => ParityCase::OddEven,
            (0, 0) => ParityCase::EvenEven,
            (1, _) => ParityCase::OddOdd,
            _ => ParityCase::EvenOdd,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ParityCase::OddEven => "odd-even",
            ParityCase::EvenEven => "even-even",
            ParityCase::OddOdd => "odd-odd",
            ParityCase::EvenOdd => "even-odd",
        }
    }

    /// Tabulated sign s in B = (−i/4) s α p(λ)/p(ρ)/sin(π(λ−ρ)/2); none is
    /// given for even n with odd l.
    pub fn printed_sign(&self) -> Option<f64> {
        match self {
            ParityCase::OddEven => Some(1.0),
            ParityCase::EvenEven | ParityCase::OddOdd => Some(-1.0),
            ParityCase::EvenOdd => None,
        }
    }
}

/// B(λ) = b(λ)/(c(λ)c(−λ)) = const · α p(λ)/p(ρ) / sin(π(λ−ρ)/2).
#[derive(Debug, Clone, PartialEq)]
pub struct BFactorChi {
    pub param: ChiParam,
    pub case: ParityCase,
    pub constant: Cx,
    pub alpha: f64,
    pub parts: CProductParts,
    p_rho: f64,
}

impl BFactorChi {
    fn build(param: ChiParam, constant: Cx, table: PTable) -> Result<Self> {
        let parts = gamma_pq(param.n, param.l, table)?;
        let rho = param.rho_plus() as i64;
        let p_rho = parts.p_int(rho) as f64;
        if p_rho == 0.0 {
            return Err(Error::Degenerate(format!("p(ρ) = 0 for {param:?}")));
        }
        let alpha = weyl_dim_oracle(param.n, param.l, 0)? as f64;
        Ok(BFactorChi { param, case: ParityCase::of(param), constant, alpha, parts, p_rho })
    }

    /// Constant i/8 with the corrected polynomial.
    pub fn new(param: ChiParam) -> Result<Self> {
        Self::build(param, Cx::new(0.0, 0.125), PTable::Corrected)
    }

    /// Tabulated constant (−i/4)s with the tabulated polynomial.
    pub fn printed(param: ChiParam) -> Result<Self> {
        let case = ParityCase::of(param);
        let s = case
            .printed_sign()
            .ok_or_else(|| Error::domain(format!("no tabulated sign for the {} case", case.name())))?;
        Self::build(param, Cx::new(0.0, -0.25 * s), PTable::Printed)
    }

    pub fn rho(&self) -> f64 {
        self.param.rho_plus() as f64
    }

    /// d_m = α p(2m+ρ)/p(ρ).
    pub fn d(&self, m: usize) -> f64 {
        self.alpha * self.parts.p_int(2 * m as i64 + self.param.rho_plus() as i64) as f64 / self.p_rho
    }

    fn p_prime(&self, lambda: Cx) -> Cx {
        let c = &self.parts.p_poly;
        (1..c.len()).rev().fold(Cx::new(0.0, 0.0), |acc, k| acc * lambda + k as f64 * c[k])
    }

    /// B(λ). Zeros of the sine at roots of p are removable.
    pub fn big_b(&self, lambda: Cx) -> Result<Cx> {
        let rho = self.rho();
        let k = ((lambda.re - rho) / 2.0).round();
        let node = rho + 2.0 * k;
        let dist = (lambda - node).norm();
        let scale = self.constant * self.alpha / self.p_rho;
        if dist < 1e-8 {
            if self.parts.p_int(node as i64) != 0 {
                return Err(Error::Pole { at: Cx::new(node, 0.0) });
            }
            // L'Hôpital at a removable node
            return Ok(scale * self.p_prime(lambda) / (PI / 2.0 * cos_pi((lambda - rho) / 2.0)));
        }
        Ok(scale * self.parts.p(lambda) / sin_pi((lambda - rho) / 2.0))
    }

    /// b(λ) = B(λ) c(λ) c(−λ).
    pub fn b(&self, lambda: Cx) -> Result<Cx> {
        let q = c_product_inv(lambda, self.param.n, self.param.l)?;
        if q == Cx::new(0.0, 0.0) {
            return Err(Error::Pole { at: lambda });
        }
        Ok(self.big_b(lambda)? / q)
    }

    /// Poles of B in [0, bound): ρ, ρ+2, ….
    pub fn poles_below(&self, bound: f64) -> Vec<i64> {
        let rho = self.param.rho_plus() as i64;
        (0..).map(|m| rho + 2 * m).take_while(|&k| (k as f64) < bound).collect()
    }

    /// Res_{λ=ρ+2m} B = const α p(ρ+2m)/p(ρ) · 2(−1)^m/π.
    pub fn residue_big_b(&self, m: usize) -> Cx {
        self.constant * self.d(m) * 2.0 * neg_one_pow(m as i64) / PI
    }

    /// a(λ)B(λ) + a(−λ)B(−λ).
    pub fn sym_big_b(&self, a: &HardyFunction, lambda: Cx) -> Result<Cx> {
        Ok(a.eval(lambda) * self.big_b(lambda)? + a.eval(-lambda) * self.big_b(-lambda)?)
    }

    /// a(λ)b(λ) + a(−λ)b(−λ). Near 0 the singularity of b cancels; there
    /// the value is the mean over a small circle.
    pub fn sym_b(&self, a: &HardyFunction, lambda: Cx) -> Result<Cx> {
        let direct = |l: Cx| -> Result<Cx> { Ok(a.eval(l) * self.b(l)? + a.eval(-l) * self.b(-l)?) };
        if lambda.norm() >= 1e-2 {
            return direct(lambda);
        }
        const NODES: usize = 32;
        let mut acc = Cx::new(0.0, 0.0);
        for j in 0..NODES {
            acc += direct(lambda + Cx::from_polar(0.05, 2.0 * PI * (j as f64 + 0.5) / NODES as f64))?;
        }
        Ok(acc / NODES as f64)
    }
}

/// b(λ) with the derived constant.
pub fn b_chi_l(n: u32, l: i32, lambda: Cx) -> Result<Cx> {
    BFactorChi::new(ChiParam::new(n, l)?)?.b(lambda)
}

/// Tabulated closed form for odd n, even l:
/// (−i/4)(−1)^{(n−l+3)/2} (α/π) 2^{4n+2|l|−3} Γ(n)² / p(ρ) / sin(πλ/2).
pub fn b_chi_l_printed_primary(n: u32, l: i32, lambda: Cx) -> Result<Cx> {
    let param = ChiParam::new(n, l)?;
    if ParityCase::of(param) != ParityCase::OddEven {
        return Err(Error::domain("closed form is tabulated for odd n and even l only"));
    }
    let big_l = param.big_l() as i64;
    let parts = gamma_pq(n, l, PTable::Printed)?;
    let p_rho = parts.p_int(param.rho_plus() as i64) as f64;
    let alpha = weyl_dim_oracle(n, l, 0)? as f64;
    let gn = gamma(Cx::new(n as f64, 0.0))?.re;
    let sign = neg_one_pow((n as i64 - big_l + 3) / 2);
    let s = sin_pi(lambda / 2.0);
    if s.norm() < 1e-15 {
        return Err(Error::Pole { at: lambda });
    }
    let mag = alpha / PI * 2f64.powi(4 * n as i32 + 2 * big_l as i32 - 3) * gn * gn / p_rho;
    Ok(Cx::new(0.0, -0.25) * sign * mag / s)
}

/// Machinery for the SU(1,n) checks at a fixed (n, l).
#[derive(Debug, Clone, PartialEq)]
pub struct MasterSu1n {
    pub param: ChiParam,
    pub bfac: BFactorChi,
    pub tol: QuadTol,
}

/// Result of [`MasterSu1n::transform_identity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransformIdentityChi {
    pub lambdas: Vec<Cx>,
    pub kappa: f64,
    /// −iκ f̂(λ).
    pub lhs: Vec<Cx>,
    /// a(λ)b(λ) + a(−λ)b(−λ).
    pub rhs: Vec<Cx>,
}

/// One term of [`MasterSu1n::residue_assembly`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueTerm {
    pub m: usize,
    /// −4πi Res_{λ=ρ+2m} a B φ_λ(a_t).
    pub assembled: Cx,
    /// (−1)^m d_m a(ρ+2m) φ_{ρ+2m}(a_t).
    pub series_term: Cx,
}

impl MasterSu1n {
    pub fn new(param: ChiParam) -> Result<Self> {
        Ok(MasterSu1n { param, bfac: BFactorChi::new(param)?, tol: QuadTol::new(1e-12, 1e-11) })
    }

    /// Same machinery with the tabulated B.
    pub fn printed(param: ChiParam) -> Result<Self> {
        Ok(MasterSu1n { param, bfac: BFactorChi::printed(param)?, tol: QuadTol::new(1e-12, 1e-11) })
    }

    fn phi(&self, lambda: Cx, t: f64) -> Result<Cx> {
        phi_chi_l(lambda, self.param, Cx::new(t, 0.0))
    }

    /// Σ_m (−1)^m d_m a(2m+ρ) φ_{2m+ρ,l}(a_t). With d_m ≤ α ρ^D (1+m)^D/p(ρ)
    /// (D = deg p) and |φ_{2m+ρ,l}(a_t)| ≤ 2 e^{(2m+|l|)|t|} the terms are
    /// bounded with ratio e^{2(|t|−p)}; |t| ≥ p is reported as divergence.
    pub fn series(&self, a: &HardyFunction, t: f64, abs_tol: f64) -> Result<SeriesValue> {
        let t = t.abs();
        if t >= a.p {
            return Err(Error::Divergence(format!("series at t = {t} outside |t| < p = {}", a.p)));
        }
        let rho = self.bfac.rho();
        let degree = self.bfac.parts.degree();
        let bound = TailBound {
            constant: self.bfac.alpha * rho.powi(degree as i32) / self.bfac.p_rho.abs()
                * 2.0
                * a.constant
                * (-a.p * rho + self.param.big_l() as f64 * t).exp(),
            ratio: (2.0 * (t - a.p)).exp(),
            degree: degree as i32,
        };
        let sum = sum_series_with_tail(
            |m| {
                let lam = Cx::new(rho + 2.0 * m as f64, 0.0);
                let av = a.eval(lam);
                if av == Cx::new(0.0, 0.0) {
                    return Ok(av);
                }
                Ok(neg_one_pow(m as i64) * self.bfac.d(m) * av * self.phi(lam, t)?)
            },
            bound,
            abs_tol,
            10_000,
        )?;
        Ok(SeriesValue { value: sum.value, terms: sum.terms, tail: sum.tail })
    }

    fn check_eta(&self, a: &HardyFunction, eta: f64) -> Result<()> {
        let max = (self.param.n as f64 * a.delta).min(self.bfac.rho());
        if !(eta >= 0.0 && eta < max) {
            return Err(Error::domain(format!("eta = {eta} outside [0, {max})")));
        }
        Ok(())
    }

    /// ∫_{Re λ = −η} (a(λ)B(λ) + a(−λ)B(−λ)) φ_{λ,l}(a_t) dλ, truncated with
    /// decay rate π/2 − A.
    pub fn contour_integral(&self, a: &HardyFunction, t: f64, eta: f64) -> Result<Cx> {
        self.contour_integral_tol(a, t, eta, self.tol)
    }

    fn contour_integral_tol(&self, a: &HardyFunction, t: f64, eta: f64, tol: QuadTol) -> Result<Cx> {
        self.check_eta(a, eta)?;
        let rate = PI / 2.0 - a.growth;
        if rate <= 0.0 {
            return Err(Error::Divergence(format!("growth A = {} ≥ π/2", a.growth)));
        }
        let err = std::cell::Cell::new(None);
        let f = |l: Cx| match self.bfac.sym_big_b(a, l).and_then(|s| Ok(s * self.phi(l, t)?)) {
            Ok(v) => v,
            Err(e) => {
                err.set(Some(e));
                Cx::new(0.0, 0.0)
            }
        };
        let degree = self.bfac.parts.degree() as f64;
        let cert = DecayCertificate::fitted(|y| f(Cx::new(-eta, y)), rate, degree, &[2.0, 4.0, 8.0, 16.0]);
        let line = integrate_vertical_line(f, -eta, tol, cert)?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok(line.value)
    }

    /// Contour representation; no discrete terms arise for |l| < n.
    pub fn contour_rhs(&self, a: &HardyFunction, t: f64, eta: f64) -> Result<Cx> {
        self.contour_integral(a, t, eta)
    }

    /// −4πi Res a B φ at λ = ρ+2m against the series terms. The factor 2
    /// collects the a(λ)B(λ) and a(−λ)B(−λ) halves.
    pub fn residue_assembly(&self, a: &HardyFunction, t: f64, ms: &[usize]) -> Result<Vec<ResidueTerm>> {
        let rho = self.bfac.rho();
        ms.iter()
            .map(|&m| {
                let pole = Cx::new(rho + 2.0 * m as f64, 0.0);
                let f = |l: Cx| {
                    self.bfac
                        .big_b(l)
                        .and_then(|b| Ok(a.eval(l) * b * self.phi(l, t)?))
                        .unwrap_or(Cx::new(f64::NAN, f64::NAN))
                };
                let res = residue_checked(f, pole, 0.25, 1e-12)?;
                let assembled = Cx::new(0.0, -4.0 * PI) * res;
                let series_term = neg_one_pow(m as i64) * self.bfac.d(m) * a.eval(pole) * self.phi(pole, t)?;
                Ok(ResidueTerm { m, assembled, series_term })
            })
            .collect()
    }

    /// max |a(λ)b(λ) + a(−λ)b(−λ)| on a polar grid in |λ| ≤ r.
    pub fn pole_free_bound(&self, a: &HardyFunction, r: f64) -> Result<f64> {
        let mut worst = self.bfac.sym_b(a, Cx::new(0.0, 0.0))?.norm();
        for i in 1..=6 {
            for j in 0..16 {
                let z = Cx::from_polar(r * i as f64 / 6.0, 2.0 * PI * j as f64 / 16.0);
                worst = worst.max(self.bfac.sym_b(a, z)?.norm());
            }
        }
        Ok(worst)
    }

    /// Samples of the contour extension f(a_t) on [0, T]. Shifting the
    /// contour gives f = O(e^{−(n+η)t}) for η < min(δ, ρ); the transform
    /// weight grows like e^{(n+0.1)t} on iℝ.
    pub fn extension_profile(&self, a: &HardyFunction, step: f64, abs_tol: f64) -> Result<SampledProfile> {
        let n = self.param.n as f64;
        let rate = n + a.delta.min(self.bfac.rho()) - 0.1;
        let growth = n + 0.1;
        if rate <= growth {
            return Err(Error::Divergence(format!("extension decays at rate {rate} ≤ {growth}")));
        }
        // |φ_{iy,l}(a_t)| ≤ (1+t)e^{−nt}: tolerances on that scale
        let eval = |t: f64| -> Result<Cx> {
            let tol = QuadTol::new(1e-14 * (-n * t).exp(), self.tol.rel);
            self.contour_integral_tol(a, t, 0.0, tol)
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

    /// −iκ f̂(λ) of the contour extension against a(λ)b(λ) + a(−λ)b(−λ).
    pub fn transform_identity_check(&self, a: &HardyFunction, lambdas: &[Cx]) -> Result<TransformIdentityChi> {
        let f = self.extension_profile(a, 0.1, 1e-8)?;
        self.transform_identity_on(a, &f, lambdas)
    }

    pub fn transform_identity_on(&self, a: &HardyFunction, f: &dyn RadialProfile, lambdas: &[Cx]) -> Result<TransformIdentityChi> {
        let kappa = kappa_chi_analytic(self.param);
        let tr = Su1nTransform::new(self.param, kappa);
        let lhs = crate::par::try_map(lambdas, |&l| Ok::<_, Error>(Cx::new(0.0, -kappa) * tr.transform(f, l)?))?;
        let rhs = lambdas.iter().map(|&l| self.bfac.sym_b(a, l)).collect::<Result<Vec<_>>>()?;
        Ok(TransformIdentityChi { lambdas: lambdas.to_vec(), kappa, lhs, rhs })
    }
}

pub fn series_f_chi_l(a: &HardyFunction, n: u32, l: i32, t: f64, tol: f64) -> Result<Cx> {
    Ok(MasterSu1n::new(ChiParam::new(n, l)?)?.series(a, t, tol)?.value)
}

pub fn contour_rhs_chi_l(a: &HardyFunction, n: u32, l: i32, t: f64, eta: f64) -> Result<Cx> {
    MasterSu1n::new(ChiParam::new(n, l)?)?.contour_rhs(a, t, eta)
}

pub fn transform_identity_check_chi_l(a: &HardyFunction, n: u32, l: i32, lambdas: &[Cx]) -> Result<TransformIdentityChi> {
    MasterSu1n::new(ChiParam::new(n, l)?)?.transform_identity_check(a, lambdas)
}

/// a(λ) = λ sin(π(λ−n−|l|)/2): growth A = π/2, vanishing at every series
/// node.
pub fn counterexample_chi(param: ChiParam) -> HardyFunction {
    let rho = param.rho_plus() as f64;
    HardyFunction::new(format!("counterexample-chi:rho={rho}"), PI / 2.0, 0.0, 1.0, 1.0, move |l: Cx| {
        l * sin_pi((l - rho) / 2.0)
    })
}

/// Outcome of the borderline probe on SU(1,n).
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleChi {
    pub param: ChiParam,
    pub series_max: f64,
    /// (height Y, |∫_{−iY}^{iY} S φ dλ|) at t = 0.
    pub truncated: Vec<(f64, f64)>,
    pub growth: f64,
    pub divergent_as_expected: bool,
}

/// With a = [`counterexample_chi`], a B + a(−·)B(−·) = 2λ (i/8) α p(λ)/p(ρ)
/// is a polynomial: the series vanishes while the contour integral does not
/// exist.
pub fn counterexample_probe_chi(param: ChiParam, ts: &[f64], heights: &[f64]) -> Result<CounterexampleChi> {
    let a = counterexample_chi(param);
    let m = MasterSu1n::new(param)?;
    let rho = m.bfac.rho();
    let mut series_max = 0.0f64;
    for &t in ts {
        let mut s = Cx::new(0.0, 0.0);
        for j in 0..60usize {
            let lam = Cx::new(rho + 2.0 * j as f64, 0.0);
            let av = a.eval(lam);
            if av != Cx::new(0.0, 0.0) {
                s += m.bfac.d(j) * av * m.phi(lam, t)?;
            }
        }
        series_max = series_max.max(s.norm());
    }
    let truncated = heights
        .iter()
        .map(|&h| {
            let g = |l: Cx| {
                m.bfac
                    .sym_big_b(&a, l)
                    .and_then(|s| Ok(s * m.phi(l, 0.0)?))
                    .unwrap_or(Cx::new(f64::NAN, f64::NAN))
            };
            let v = integrate_vertical_segment(&g, 0.0, -h, h, QuadTol::new(1e-10, 1e-10))?;
            Ok((h, v.value.norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    let growth = match (truncated.first(), truncated.last()) {
        (Some(f), Some(l)) if f.1 > 0.0 => l.1 / f.1,
        _ => 0.0,
    };
    let divergent_as_expected = series_max <= 1e-12 && growth >= 10.0;
    Ok(CounterexampleChi { param, series_max, truncated, growth, divergent_as_expected })
}

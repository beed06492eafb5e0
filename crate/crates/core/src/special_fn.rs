//! Complex special functions: log-gamma, Gauss hypergeometric ₂F₁ and the
//! Jacobi function φ^{(α,β)}_λ.
//!
//! `ln_gamma` uses the Lanczos approximation (g = 607/128, fifteen terms) on
//! Re z ≥ 1/2 and reflection elsewhere. `hyp2f1` switches between three
//! routes depending on z:
//!
//! | region                                  | route                         |
//! |-----------------------------------------|-------------------------------|
//! | \|z\| ≤ 1/2                             | Maclaurin series              |
//! | \|z\| ≥ 3, \|arg(−z)\| ≤ 1.2            | 1/z connection formula        |
//! | \|z/(z−1)\| ≤ 0.9                       | Pfaff transformation          |
//!
//! When b − a is close to an integer the connection formula is singular
//! term by term; there the value is recovered by Chebyshev interpolation in
//! the perturbation b − a − round(b − a), which never evaluates the
//! singular point itself.

use crate::error::{finite, Error, Result};
use crate::Cx;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Nonpositive integer nearest to `z`, if `z` sits on a pole of Γ.
fn gamma_pole(z: Cx) -> Option<f64> {
    let r = z.re.round();
    if r <= 0.0 && (z.re - r).abs() < 1e-14 && z.im.abs() < 1e-14 {
        Some(r)
    } else {
        None
    }
}

/// sin(πz) with exact argument reduction, so integers give exactly 0.
pub fn sin_pi(z: Cx) -> Cx {
    let (s, c) = sincos_pi_real(z.re);
    let y = PI * z.im;
    Cx::new(s * y.cosh(), c * y.sinh())
}

/// cos(πz) with exact argument reduction, so half-integers give exactly 0.
pub fn cos_pi(z: Cx) -> Cx {
    let (s, c) = sincos_pi_real(z.re);
    let y = PI * z.im;
    Cx::new(c * y.cosh(), -s * y.sinh())
}

fn sincos_pi_real(x: f64) -> (f64, f64) {
    // reduce to r in [-1, 1] with x = r + 2k
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 {
        return (0.0, 1.0);
    }
    if r.abs() == 1.0 {
        return (0.0, -1.0);
    }
    if r == 0.5 {
        return (1.0, 0.0);
    }
    if r == -0.5 {
        return (-1.0, 0.0);
    }
    let (s, c) = (PI * r).sin_cos();
    (s, c)
}

/// ln sin(πz), stable for large |Im z|. The imaginary part is defined
/// modulo 2π.
fn ln_sin_pi(z: Cx) -> Cx {
    let i = Cx::i();
    if z.im > 1.0 {
        // sin(πz) = (i/2) e^{-iπz} (1 - e^{2iπz})
        let e = (2.0 * i * PI * z).exp();
        -i * PI * z + Cx::new(0.5f64.ln(), PI / 2.0) + (Cx::new(1.0, 0.0) - e).ln()
    } else if z.im < -1.0 {
        let e = (-2.0 * i * PI * z).exp();
        i * PI * z + Cx::new(0.5f64.ln(), -PI / 2.0) + (Cx::new(1.0, 0.0) - e).ln()
    } else {
        sin_pi(z).ln()
    }
}

fn ln_gamma_lanczos(z: Cx) -> Cx {
    let z = z - 1.0;
    let mut x = Cx::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + x.ln()
}

/// Complex log-gamma. `exp(ln_gamma(z)) == Γ(z)`; on Re z ≥ 1/2 the value is
/// the analytic continuation from the positive axis.
pub fn ln_gamma(z: Cx) -> Result<Cx> {
    if let Some(r) = gamma_pole(z) {
        return Err(Error::Pole { at: Cx::new(r, 0.0) });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("ln_gamma: non-finite argument"));
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_lanczos(z))
    } else {
        let one_minus = Cx::new(1.0, 0.0) - z;
        Ok(Cx::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_lanczos(one_minus))
    }
}

/// Γ(z).
pub fn gamma(z: Cx) -> Result<Cx> {
    if z.im == 0.0 && z.re > 0.0 && z.re <= 171.0 && z.re.fract() == 0.0 {
        // exact factorial for small integers
        let mut f = 1.0;
        for k in 2..(z.re as u32) {
            f *= k as f64;
        }
        return Ok(Cx::new(f, 0.0));
    }
    finite(ln_gamma(z)?.exp(), "gamma")
}

/// 1/Γ(z), entire; zero at the poles of Γ.
pub fn rgamma(z: Cx) -> Cx {
    match ln_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => Cx::new(0.0, 0.0),
    }
}

/// Π Γ(num_i) / Π Γ(den_j). A pole in the denominator gives 0, a pole in
/// the numerator is an error.
pub fn gamma_ratio(num: &[Cx], den: &[Cx]) -> Result<Cx> {
    if den.iter().any(|&z| gamma_pole(z).is_some()) {
        return Ok(Cx::new(0.0, 0.0));
    }
    let mut acc = Cx::new(0.0, 0.0);
    for &z in num {
        acc += ln_gamma(z)?;
    }
    for &z in den {
        acc -= ln_gamma(z)?;
    }
    finite(acc.exp(), "gamma_ratio")
}

fn nonpositive_integer(z: Cx) -> Option<u64> {
    gamma_pole(z).map(|r| (-r) as u64)
}

/// Maclaurin series of ₂F₁. Stops when two successive terms fall below
/// machine precision relative to the partial sum. Fails with
/// [`Error::Accuracy`] when cancellation leaves fewer than ~12 digits.
fn series(a: Cx, b: Cx, c: Cx, z: Cx) -> Result<Cx> {
    let (best, err) = series_est(a, b, c, z)?;
    checked(best, err)
}

const MAX_LOSS: f64 = 1e-12;

fn checked(best: Cx, err: f64) -> Result<Cx> {
    let best = finite(best, "hyp2f1")?;
    if err > MAX_LOSS * best.norm() {
        return Err(Error::Accuracy { best, err });
    }
    Ok(best)
}

/// Maclaurin sum with a rounding error estimate.
fn series_est(a: Cx, b: Cx, c: Cx, z: Cx) -> Result<(Cx, f64)> {
    const MAX_TERMS: usize = 20_000;
    let mut term = Cx::new(1.0, 0.0);
    let mut sum = term;
    let mut comp = Cx::new(0.0, 0.0);
    let mut abs_sum = 1.0;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let num = (a + kf) * (b + kf);
        if num == Cx::new(0.0, 0.0) {
            return Ok((sum + comp, 4.0 * f64::EPSILON * abs_sum));
        }
        term *= num / ((c + kf) * (kf + 1.0)) * z;
        // Neumaier compensation
        let t = sum + term;
        if sum.norm() >= term.norm() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        abs_sum += term.norm();
        if term.norm() <= 1e-17 * sum.norm() {
            small += 1;
            if small >= 2 {
                let best = finite(sum + comp, "hyp2f1 series")?;
                return Ok((best, 4.0 * f64::EPSILON * abs_sum));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Accuracy { best: sum + comp, err: term.norm() })
}

/// Terminating series when a (or b) is a nonpositive integer.
fn polynomial(a: Cx, b: Cx, c: Cx, z: Cx, degree: u64) -> Result<Cx> {
    let mut term = Cx::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..degree {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    finite(sum, "hyp2f1 polynomial")
}

#[derive(Clone, Copy)]
enum Connection {
    /// Expansion in 1/z.
    Inverse,
    /// Expansion in 1/(1−z).
    OneMinus,
}

/// Generic connection formula; singular when b − a is an integer.
fn connection(kind: Connection, a: Cx, b: Cx, c: Cx, z: Cx) -> Result<Cx> {
    let one = Cx::new(1.0, 0.0);
    let t1 = gamma_ratio(&[c, b - a], &[b, c - a])?;
    let t2 = gamma_ratio(&[c, a - b], &[a, c - b])?;
    let (base, x, p1, p2) = match kind {
        Connection::Inverse => (-z, z.inv(), a - c + one, b - c + one),
        Connection::OneMinus => (one - z, (one - z).inv(), c - b, c - a),
    };
    let mut out = Cx::new(0.0, 0.0);
    let mut err = 0.0;
    if t1 != Cx::new(0.0, 0.0) {
        let f = t1 * base.powc(-a);
        let (v, e) = series_est(a, p1, a - b + one, x)?;
        out += f * v;
        err += f.norm() * e;
    }
    if t2 != Cx::new(0.0, 0.0) {
        let f = t2 * base.powc(-b);
        let (v, e) = series_est(b, p2, b - a + one, x)?;
        out += f * v;
        err += f.norm() * e;
    }
    checked(out, err)
}

/// Connection formula with Chebyshev interpolation across integer b − a.
fn connection_regularized(kind: Connection, a: Cx, b: Cx, c: Cx, z: Cx) -> Result<Cx> {
    const NEAR: f64 = 0.02;
    const HALF_WIDTH: f64 = 0.05;
    const NODES: usize = 14;
    let s = b - a;
    let s0 = s.re.round();
    let u = s - s0;
    if u.norm() > NEAR {
        return connection(kind, a, b, c, z);
    }
    // g(v) = F(a' - v/2, b' + v/2) with b' - a' = s0 and a' + b' = a + b
    let ap = a + u / 2.0;
    let bp = b - u / 2.0;
    let mut xs = [0.0f64; NODES];
    let mut gs = [Cx::new(0.0, 0.0); NODES];
    for j in 0..NODES {
        let x = HALF_WIDTH * (PI * (j as f64 + 0.5) / NODES as f64).cos();
        xs[j] = x;
        gs[j] = connection(kind, ap - x / 2.0, bp + x / 2.0, c, z)?;
    }
    // barycentric form for Chebyshev points of the first kind
    let mut num = Cx::new(0.0, 0.0);
    let mut den = Cx::new(0.0, 0.0);
    for j in 0..NODES {
        let w = (PI * (j as f64 + 0.5) / NODES as f64).sin() * if j % 2 == 0 { 1.0 } else { -1.0 };
        let d = u - xs[j];
        if d.norm() < 1e-15 {
            return Ok(gs[j]);
        }
        num += w * gs[j] / d;
        den += w / d;
    }
    finite(num / den, "hyp2f1 regularized connection")
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z).
///
/// Supported: |z| ≤ 1/2, the Pfaff region |z/(z−1)| ≤ 0.9, |1/(1−z)| ≤ 0.95
/// with |arg(1−z)| ≤ 2, and |z| ≥ 3 with |arg(−z)| ≤ 1.2. This covers every
/// z within 1/2 of (−∞, 0] and the arguments −sinh²(t + is) with |s| ≤ 0.3.
/// Where several representations apply, the first one meeting the accuracy
/// target is used, otherwise the one with the smallest error estimate.
pub fn hyp2f1(a: Cx, b: Cx, c: Cx, z: Cx) -> Result<Cx> {
    if let Some(r) = gamma_pole(c) {
        return Err(Error::Pole { at: Cx::new(r, 0.0) });
    }
    for p in [a, b, c, z] {
        if !(p.re.is_finite() && p.im.is_finite()) {
            return Err(Error::domain("hyp2f1: non-finite argument"));
        }
    }
    if z == Cx::new(0.0, 0.0) {
        return Ok(Cx::new(1.0, 0.0));
    }
    let term = [a, b].iter().filter_map(|&p| nonpositive_integer(p)).min();
    if let Some(deg) = term {
        if z.norm() <= 1.0 || deg <= 400 {
            return polynomial(a, b, c, z, deg);
        }
    }
    let one = Cx::new(1.0, 0.0);
    let r = z.norm();
    let w = z / (z - one);
    let x = (one - z).inv();
    let mut attempts: Vec<Box<dyn Fn() -> Result<Cx>>> = Vec::new();
    if r <= 0.5 {
        attempts.push(Box::new(|| series(a, b, c, z)));
    }
    if r >= 3.0 && (-z).arg().abs() <= 1.2 {
        attempts.push(Box::new(|| connection_regularized(Connection::Inverse, a, b, c, z)));
    }
    if w.norm() <= 0.9 {
        attempts.push(Box::new(|| {
            let f = (one - z).powc(-a);
            let (v, e) = series_est(a, c - b, c, w)?;
            checked(f * v, f.norm() * e)
        }));
    }
    if x.norm() <= 0.95 && (one - z).arg().abs() <= 2.0 {
        attempts.push(Box::new(|| connection_regularized(Connection::OneMinus, a, b, c, z)));
    }
    if attempts.is_empty() {
        return Err(Error::domain(format!("hyp2f1: z = {z} outside supported region")));
    }
    let mut fallback: Option<Error> = None;
    for f in &attempts {
        match f() {
            Ok(v) => return Ok(v),
            Err(e @ Error::Accuracy { .. }) => {
                let better = match (&fallback, &e) {
                    (Some(Error::Accuracy { best: b0, err: e0 }), Error::Accuracy { best, err }) => {
                        err / best.norm() < e0 / b0.norm()
                    }
                    _ => true,
                };
                if better {
                    fallback = Some(e);
                }
            }
            Err(e) => {
                if fallback.is_none() {
                    fallback = Some(e);
                }
            }
        }
    }
    Err(fallback.expect("at least one attempt"))
}

/// Jacobi function φ^{(α,β)}_λ(t) = ₂F₁((ρ−λ)/2, (ρ+λ)/2; α+1; −sinh²t) with
/// ρ = α+β+1, for complex t in the strip |Im t| ≤ 0.3.
pub fn jacobi_phi(alpha: f64, beta: f64, lambda: Cx, t: Cx) -> Result<Cx> {
    if t.im.abs() > 0.3 + 1e-12 {
        return Err(Error::domain(format!("jacobi_phi: |Im t| = {} > 0.3", t.im.abs())));
    }
    let rho = alpha + beta + 1.0;
    let sh = t.sinh();
    hyp2f1(
        (rho - lambda) / 2.0,
        (rho + lambda) / 2.0,
        Cx::new(alpha + 1.0, 0.0),
        -sh * sh,
    )
}

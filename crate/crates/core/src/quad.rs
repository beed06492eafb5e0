//! Quadrature and contour integration with certified error budgets.
//!
//! Every routine returns an error estimate alongside the value. Infinite
//! lines are truncated where a caller-supplied decay certificate bounds the
//! tails below a tenth of the absolute tolerance; series stop where a
//! geometric tail certificate does the same.

use crate::error::{Error, Result};
use crate::Cx;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

// 7-point Gauss / 15-point Kronrod on [-1, 1]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Absolute/relative tolerance and bisection depth limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
    pub max_depth: u32,
}

impl Default for QuadTol {
    fn default() -> Self {
        QuadTol { abs: 1e-12, rel: 1e-10, max_depth: 48 }
    }
}

impl QuadTol {
    pub fn new(abs: f64, rel: f64) -> Self {
        QuadTol { abs, rel, ..Default::default() }
    }

    pub fn scaled(self, factor: f64) -> Self {
        QuadTol { abs: self.abs * factor, ..self }
    }
}

/// Integral value with error estimate and evaluation count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Cx,
    pub err: f64,
    pub evals: usize,
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Cx,
    comp: Cx,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Cx) {
        self.sum = Cx::new(
            neumaier(self.sum.re, x.re, &mut self.comp.re),
            neumaier(self.sum.im, x.im, &mut self.comp.im),
        );
    }

    pub fn value(&self) -> Cx {
        self.sum + self.comp
    }
}

fn neumaier(s: f64, x: f64, c: &mut f64) -> f64 {
    let t = s + x;
    if s.abs() >= x.abs() {
        *c += (s - t) + x;
    } else {
        *c += (x - t) + s;
    }
    t
}

impl FromIterator<Cx> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Cx>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Cx,
    err: f64,
    floor: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// One 15-point Kronrod panel: (value, error estimate, roundoff floor).
fn kronrod15<F: Fn(f64) -> Cx>(f: &F, a: f64, b: f64) -> Result<(Cx, f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut fv = [Cx::new(0.0, 0.0); 15];
    fv[7] = fc;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        k += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    if !(k.re.is_finite() && k.im.is_finite()) {
        return Err(Error::domain(format!("non-finite integrand on [{a}, {b}]")));
    }
    // QUADPACK-style error scaling
    let mean = k * 0.5;
    let mut resasc = (fc - mean).norm() * WGK[7];
    let mut resabs = fc.norm() * WGK[7];
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).norm() + (fv[14 - j] - mean).norm());
        resabs += WGK[j] * (fv[j].norm() + fv[14 - j].norm());
    }
    let hk = h.abs();
    resasc *= hk;
    resabs *= hk;
    let mut err = ((k - g) * h).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    err = err.max(floor);
    Ok((k * h, err, floor))
}

/// Adaptive Gauss–Kronrod integral of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> Cx>(f: F, a: f64, b: f64, tol: QuadTol) -> Result<Estimate> {
    integrate_panels(f, &[a, b], tol)
}

/// Adaptive Gauss–Kronrod integral over consecutive panels given by
/// `breaks`. Refinement is global: the panel with the largest error
/// estimate is bisected until the total meets the tolerance.
pub fn integrate_panels<F: Fn(f64) -> Cx>(f: F, breaks: &[f64], tol: QuadTol) -> Result<Estimate> {
    const MAX_PANELS: usize = 40_000;
    if breaks.len() < 2 {
        return Ok(Estimate { value: Cx::new(0.0, 0.0), err: 0.0, evals: 0 });
    }
    let mut heap = BinaryHeap::new();
    let mut evals = 0;
    let mut total = Cx::new(0.0, 0.0);
    let mut err = 0.0;
    let mut floor = 0.0;
    for w in breaks.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let (v, e, fl) = kronrod15(&f, w[0], w[1])?;
        evals += 15;
        total += v;
        err += e;
        floor += fl;
        heap.push(Panel { a: w[0], b: w[1], value: v, err: e, floor: fl, depth: 0 });
    }
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps.is_multiple_of(256) {
            // refresh running sums against drift
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.err).sum();
            floor = heap.iter().map(|p| p.floor).sum();
        }
        // roundoff in the panel sums bounds what bisection can achieve
        let target = tol.abs.max(tol.rel * total.norm()).max(2.0 * floor);
        if err <= target || heap.is_empty() {
            let mut all: Vec<Panel> = heap.into_vec();
            all.sort_by(|x, y| x.a.total_cmp(&y.a));
            let value = all.iter().map(|p| p.value).collect::<CompensatedSum>().value();
            if err > target {
                return Err(Error::Accuracy { best: value, err });
            }
            return Ok(Estimate { value, err, evals });
        }
        let worst = heap.pop().expect("non-empty heap");
        if worst.depth >= tol.max_depth || heap.len() >= MAX_PANELS {
            heap.push(worst);
            let value = heap.iter().map(|p| p.value).sum();
            return Err(Error::Accuracy { best: value, err });
        }
        let m = 0.5 * (worst.a + worst.b);
        let (v1, e1, f1) = kronrod15(&f, worst.a, m)?;
        let (v2, e2, f2) = kronrod15(&f, m, worst.b)?;
        evals += 30;
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        floor += f1 + f2 - worst.floor;
        heap.push(Panel { a: worst.a, b: m, value: v1, err: e1, floor: f1, depth: worst.depth + 1 });
        heap.push(Panel { a: m, b: worst.b, value: v2, err: e2, floor: f2, depth: worst.depth + 1 });
    }
}

/// Path integral ∫ f(z) dz along the straight segment from `z0` to `z1`.
pub fn integrate_segment<F: Fn(Cx) -> Cx>(f: F, z0: Cx, z1: Cx, tol: QuadTol) -> Result<Estimate> {
    let d = z1 - z0;
    let len = d.norm();
    if len == 0.0 {
        return Ok(Estimate { value: Cx::new(0.0, 0.0), err: 0.0, evals: 0 });
    }
    let n = (len.ceil() as usize).clamp(1, 256);
    let breaks: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    let tol = QuadTol { abs: tol.abs / len, ..tol };
    let est = integrate_panels(|s| f(z0 + d * s), &breaks, tol)?;
    Ok(Estimate { value: est.value * d, err: est.err * len, evals: est.evals })
}

/// ∫ |f(z)| |dz| along a segment.
pub fn integrate_abs_segment<F: Fn(Cx) -> Cx>(f: F, z0: Cx, z1: Cx, tol: QuadTol) -> Result<f64> {
    let est = integrate_segment(|z| Cx::new(f(z).norm(), 0.0), z0, z1, tol)?;
    Ok(est.value.norm())
}

/// Bound |f(x0 + iy)| ≤ C (1+|y|)^d e^{−r|y|} on a vertical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCertificate {
    pub constant: f64,
    pub rate: f64,
    pub degree: f64,
}

impl DecayCertificate {
    pub fn new(constant: f64, rate: f64, degree: f64) -> Self {
        DecayCertificate { constant, rate, degree }
    }

    pub fn envelope(&self, y: f64) -> f64 {
        self.constant * (1.0 + y.abs()).powf(self.degree) * (-self.rate * y.abs()).exp()
    }

    /// Bound on ∫_{|y|>Y} |f|, both tails together; infinite if the bound
    /// does not apply at this height.
    pub fn tail(&self, height: f64) -> f64 {
        let denom = self.rate - self.degree / (1.0 + height);
        if denom <= 0.0 {
            return f64::INFINITY;
        }
        2.0 * self.envelope(height) / denom
    }

    /// Smallest height (on a 1/4 grid) where the tail drops below `target`.
    pub fn truncation_height(&self, target: f64) -> Result<f64> {
        if self.rate <= 0.0 {
            return Err(Error::Divergence(format!(
                "decay rate {} is not positive; line integral not certified",
                self.rate
            )));
        }
        let mut y = 1.0;
        while self.tail(y) > target {
            y += 0.25;
            if y > 1e4 {
                return Err(Error::Divergence("truncation height exceeds 1e4".into()));
            }
        }
        Ok(y)
    }

    /// Fit the constant from samples of |f| at the given heights, with a
    /// safety factor of 4.
    pub fn fitted<F: Fn(f64) -> Cx>(f: F, rate: f64, degree: f64, heights: &[f64]) -> Self {
        let probe = DecayCertificate { constant: 1.0, rate, degree };
        let c = heights
            .iter()
            .map(|&y| f(y).norm() / probe.envelope(y))
            .fold(0.0f64, f64::max);
        DecayCertificate { constant: 4.0 * c.max(f64::MIN_POSITIVE), rate, degree }
    }
}

/// Result of a truncated line integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineIntegral {
    pub value: Cx,
    pub err: f64,
    pub height: f64,
    pub tail: f64,
}

/// ∫_{x0−i∞}^{x0+i∞} f(λ) dλ (upward), truncated at the certified height.
pub fn integrate_vertical_line<F: Fn(Cx) -> Cx>(
    f: F,
    x0: f64,
    tol: QuadTol,
    cert: DecayCertificate,
) -> Result<LineIntegral> {
    let height = cert.truncation_height(tol.abs / 10.0)?;
    let est = integrate_vertical_segment(&f, x0, -height, height, tol)?;
    let tail = cert.tail(height);
    Ok(LineIntegral { value: est.value, err: est.err + tail, height, tail })
}

/// ∫ f(λ) dλ along x0 + iy for y in [y0, y1], panelled at ±1, ±2, ±4, ….
pub fn integrate_vertical_segment<F: Fn(Cx) -> Cx>(
    f: &F,
    x0: f64,
    y0: f64,
    y1: f64,
    tol: QuadTol,
) -> Result<Estimate> {
    let mut breaks = vec![y0, y1];
    let mut p = 1.0;
    while p < y0.abs().max(y1.abs()) {
        for b in [-p, p] {
            if b > y0 && b < y1 {
                breaks.push(b);
            }
        }
        p *= 2.0;
    }
    if 0.0 > y0 && 0.0 < y1 {
        breaks.push(0.0);
    }
    breaks.sort_by(f64::total_cmp);
    let est = integrate_panels(|y| f(Cx::new(x0, y)), &breaks, tol)?;
    Ok(Estimate { value: est.value * Cx::i(), ..est })
}

/// Axis-aligned rectangle [x0, x1] × [y0, y1] in the λ-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rectangle {
    /// Corners in counterclockwise order starting at the lower left.
    pub fn corners(&self) -> [Cx; 4] {
        [
            Cx::new(self.x0, self.y0),
            Cx::new(self.x1, self.y0),
            Cx::new(self.x1, self.y1),
            Cx::new(self.x0, self.y1),
        ]
    }

    pub fn contains(&self, z: Cx) -> bool {
        z.re > self.x0 && z.re < self.x1 && z.im > self.y0 && z.im < self.y1
    }

    pub fn distance_to_boundary(&self, z: Cx) -> f64 {
        let dx = (z.re - self.x0).abs().min((z.re - self.x1).abs());
        let dy = (z.im - self.y0).abs().min((z.im - self.y1).abs());
        let on_x = z.im >= self.y0 && z.im <= self.y1;
        let on_y = z.re >= self.x0 && z.re <= self.x1;
        match (on_x, on_y) {
            (true, true) => dx.min(dy),
            (true, false) => dx,
            (false, true) => dy,
            (false, false) => (dx * dx + dy * dy).sqrt(),
        }
    }
}

/// Counterclockwise rectangle integral with per-edge data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectangleIntegral {
    pub total: Cx,
    /// Oriented edge integrals: bottom, right, top, left.
    pub edges: [Cx; 4],
    /// ∫|f||dλ| per edge, same order.
    pub edge_abs: [f64; 4],
    pub err: f64,
}

/// Counterclockwise ∮ f over the rectangle boundary.
pub fn integrate_rectangle<F: Fn(Cx) -> Cx>(f: F, rect: Rectangle, tol: QuadTol) -> Result<RectangleIntegral> {
    let c = rect.corners();
    let mut edges = [Cx::new(0.0, 0.0); 4];
    let mut edge_abs = [0.0; 4];
    let mut err = 0.0;
    let mut total = CompensatedSum::new();
    for k in 0..4 {
        let (z0, z1) = (c[k], c[(k + 1) % 4]);
        let e = integrate_segment(&f, z0, z1, tol.scaled(0.25))?;
        edges[k] = e.value;
        edge_abs[k] = integrate_abs_segment(&f, z0, z1, tol)?;
        err += e.err;
        total.add(e.value);
    }
    Ok(RectangleIntegral { total: total.value(), edges, edge_abs, err })
}

/// Residue at a simple (or any isolated) pole from the circle integral
/// (1/2πi)∮ f; trapezoid rule with doubling, which converges geometrically
/// for functions analytic in an annulus.
pub fn residue_simple<F: Fn(Cx) -> Cx>(f: F, pole: Cx, radius: f64, tol: f64) -> Result<Cx> {
    let eval = |n: usize| -> Cx {
        let s: CompensatedSum = (0..n)
            .map(|k| {
                let e = Cx::from_polar(radius, 2.0 * PI * (k as f64 + 0.5) / n as f64);
                f(pole + e) * e
            })
            .collect();
        s.value() / n as f64
    };
    let mut n = 16;
    let mut prev = eval(n);
    while n < 1 << 16 {
        n *= 2;
        let cur = eval(n);
        if (cur - prev).norm() <= tol.max(1e-15 * cur.norm()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Accuracy { best: prev, err: f64::NAN })
}

/// Residue with a radius-halving consistency check: a second pole inside
/// the circle shows up as disagreement between r and r/2.
pub fn residue_checked<F: Fn(Cx) -> Cx>(f: F, pole: Cx, radius: f64, tol: f64) -> Result<Cx> {
    let r1 = residue_simple(&f, pole, radius, tol)?;
    let r2 = residue_simple(&f, pole, radius / 2.0, tol)?;
    if (r1 - r2).norm() > 1e3 * tol.max(1e-12 * r1.norm()) {
        return Err(Error::Invariant(format!(
            "residue at {pole} depends on radius: {r1} vs {r2}"
        )));
    }
    Ok(r2)
}

/// Termwise bound |term_m| ≤ C (1+m)^d r^m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub constant: f64,
    pub ratio: f64,
    pub degree: i32,
}

impl TailBound {
    pub fn geometric(constant: f64, ratio: f64) -> Self {
        TailBound { constant, ratio, degree: 0 }
    }

    /// Bound on Σ_{m ≥ start} |term_m|; infinite if not yet decreasing.
    pub fn tail_from(&self, start: usize) -> f64 {
        let m = start as f64;
        let growth = ((m + 2.0) / (m + 1.0)).powi(self.degree);
        let q = self.ratio * growth;
        if q >= 1.0 {
            return f64::INFINITY;
        }
        self.constant * (1.0 + m).powi(self.degree) * self.ratio.powf(m) / (1.0 - q)
    }

    /// Number of terms needed for the tail to fall below `tol`.
    pub fn terms_needed(&self, tol: f64, max_terms: usize) -> Result<usize> {
        if !(self.ratio < 1.0) || !self.constant.is_finite() {
            return Err(Error::Divergence(format!(
                "tail ratio {} ≥ 1; series not certified",
                self.ratio
            )));
        }
        if self.constant == 0.0 {
            return Ok(0);
        }
        (0..=max_terms)
            .find(|&m| self.tail_from(m) <= tol)
            .ok_or_else(|| Error::Divergence(format!("tail above {tol:e} after {max_terms} terms")))
    }
}

/// Certified partial sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: Cx,
    pub terms: usize,
    pub tail: f64,
}

/// Σ term(m) with the number of terms chosen up front from the tail bound.
/// Terms are evaluated through [`crate::par`], then summed in order.
pub fn sum_series_with_tail<F>(term: F, bound: TailBound, abs_tol: f64, max_terms: usize) -> Result<SeriesSum>
where
    F: Fn(usize) -> Result<Cx> + Sync + Send,
{
    let n = bound.terms_needed(abs_tol, max_terms)?;
    let idx: Vec<usize> = (0..n).collect();
    let terms = crate::par::try_map(&idx, |&m| term(m))?;
    let value = terms.into_iter().collect::<CompensatedSum>().value();
    Ok(SeriesSum { value, terms: n, tail: bound.tail_from(n) })
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss–Legendre rule on [a, b]: `panels` equal panels of
/// `order` nodes. Returns (nodes, weights).
pub fn composite_rule(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let c = a + h * (p as f64 + 0.5);
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(c + 0.5 * h * xi);
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx;

    #[test]
    fn polynomial_exact() {
        let e = integrate(|x| cx(x.powi(5) - 3.0 * x * x, 0.0), -1.0, 2.0, QuadTol::default()).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((e.value.re - exact).abs() < 1e-13);
    }

    #[test]
    fn endpoint_peak() {
        // ∫_0^1 ε/(ε² + x²) dx = atan(1/ε)
        let eps = 1e-6;
        let e = integrate(|x| cx(eps / (eps * eps + x * x), 0.0), 0.0, 1.0, QuadTol::new(1e-12, 1e-12)).unwrap();
        assert!((e.value.re - (1.0 / eps).atan()).abs() < 1e-10, "{}", e.value.re);
    }

    #[test]
    fn accuracy_error_carries_estimate() {
        let tol = QuadTol { abs: 1e-15, rel: 0.0, max_depth: 2 };
        match integrate(|x| cx(x.abs().sqrt(), 0.0), 0.0, 1.0, tol) {
            Err(Error::Accuracy { best, .. }) => assert!((best.re - 2.0 / 3.0).abs() < 1e-3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gaussian_line() {
        // ∫ e^{λ²} dλ upward along iR = i√π
        let cert = DecayCertificate::new(1.0, 1.0, 0.0);
        let li = integrate_vertical_line(|l| (l * l).exp(), 0.0, QuadTol::new(1e-12, 1e-12), cert).unwrap();
        assert!((li.value - cx(0.0, PI.sqrt())).norm() < 1e-11);
    }

    #[test]
    fn zero_rate_is_divergent() {
        let cert = DecayCertificate::new(1.0, 0.0, 0.0);
        assert!(matches!(
            integrate_vertical_line(|_| cx(1.0, 0.0), 0.0, QuadTol::default(), cert),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn rectangle_cauchy() {
        let r = Rectangle { x0: -1.0, x1: 2.0, y0: -1.5, y1: 0.5 };
        let f = |z: Cx| z.exp() / (z - 0.3);
        let ri = integrate_rectangle(f, r, QuadTol::new(1e-13, 1e-13)).unwrap();
        let expect = cx(0.0, 2.0 * PI) * 0.3f64.exp();
        assert!((ri.total - expect).norm() < 1e-11);
        let res = residue_checked(f, cx(0.3, 0.0), 0.1, 1e-14).unwrap();
        assert!((res - 0.3f64.exp()).norm() < 1e-13);
    }

    #[test]
    fn residue_radius_check_catches_second_pole() {
        let f = |z: Cx| 1.0 / (z * (z - 0.3));
        assert!(residue_checked(f, cx(0.0, 0.0), 0.5, 1e-12).is_err());
    }

    #[test]
    fn series_tail() {
        // Σ 2^{-m} = 2
        let s = sum_series_with_tail(|m| Ok(cx(0.5f64.powi(m as i32), 0.0)), TailBound::geometric(1.0, 0.5), 1e-12, 200)
            .unwrap();
        assert!((s.value.re - 2.0).abs() < 1e-12);
        assert!(s.tail <= 1e-12);
        assert!(matches!(
            sum_series_with_tail(|_| Ok(cx(1.0, 0.0)), TailBound::geometric(1.0, 1.0), 1e-12, 200),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn legendre_rule() {
        let (x, w) = composite_rule(0.0, 2.0, 3, 10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(7)).sum();
        assert!((s - 256.0 / 8.0).abs() < 1e-12);
    }
}

//! χ_l-spherical analysis on SU(1,n), |l| < n: root data, the c-function and
//! its γ·p·q factorization, dimensions of χ_l-spherical representations of
//! SU(n+1), the Iwasawa projection, χ_l-spherical functions and the
//! spherical transform pair.

use crate::error::{Error, Result};
use crate::profile::{Memo, RadialProfile};
use crate::quad::{integrate, integrate_panels, integrate_vertical_line, DecayCertificate, QuadTol};
use crate::sl2::{bound_lambda_grid, GridConstant};
use crate::special_fn::{cos_pi, gamma, jacobi_phi, sin_pi};
use crate::Cx;
use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;
use std::f64::consts::PI;

/// (n, l) with n ≥ 2 and |l| < n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChiParam {
    pub n: u32,
    pub l: i32,
}

impl ChiParam {
    pub fn new(n: u32, l: i32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("n = {n} < 2")));
        }
        if l.unsigned_abs() >= n {
            return Err(Error::domain(format!("|l| = {} ≥ n = {n} is out of scope", l.abs())));
        }
        Ok(ChiParam { n, l })
    }

    /// |l|.
    pub fn big_l(&self) -> u32 {
        self.l.unsigned_abs()
    }

    /// ρ(m₊(l)) = n + |l|.
    pub fn rho_plus(&self) -> u32 {
        self.n + self.big_l()
    }
}

/// Restricted root multiplicities for SU(1,n) and their χ_l shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootData {
    pub m_beta: f64,
    pub m_2beta: f64,
    pub rho: f64,
    /// m₊(l) = (2(n−1)−2|l|, 1+2|l|).
    pub m_plus: (f64, f64),
    pub rho_plus: f64,
}

/// Half-sum ρ = m_β/2 + m_{2β}.
pub fn half_sum(mults: (f64, f64)) -> f64 {
    mults.0 / 2.0 + mults.1
}

pub fn structure_constants(n: u32, l: i32) -> Result<RootData> {
    let p = ChiParam::new(n, l)?;
    let (nf, lf) = (n as f64, p.big_l() as f64);
    let m_beta = 2.0 * (nf - 1.0);
    let m_2beta = 1.0;
    let m_plus = (2.0 * (nf - 1.0) - 2.0 * lf, 1.0 + 2.0 * lf);
    Ok(RootData {
        m_beta,
        m_2beta,
        rho: half_sum((m_beta, m_2beta)),
        m_plus,
        rho_plus: half_sum(m_plus),
    })
}

/// c(λ, m) = 2^{ρ−λ} Γ((m_β+m_{2β}+1)/2) Γ(λ) / (Γ(λ/2+m_β/4+m_{2β}/2) Γ(λ/2+m_β/4+1/2)).
pub fn c_fn(lambda: Cx, mults: (f64, f64)) -> Result<Cx> {
    let (mb, m2b) = mults;
    let rho = half_sum(mults);
    let num = gamma(Cx::new((mb + m2b + 1.0) / 2.0, 0.0))? * gamma(lambda)?;
    let d1 = gamma(lambda / 2.0 + mb / 4.0 + m2b / 2.0)?;
    let d2 = gamma(lambda / 2.0 + mb / 4.0 + 0.5)?;
    Ok(((rho - lambda) * std::f64::consts::LN_2).exp() * num / (d1 * d2))
}

/// 1/(c(λ, m₊(l)) c(−λ, m₊(l))) as the Gamma quotient
/// 2^{−2(n+|l|)} Γ(n)^{−2} Γ((±λ+n+|l|)/2) Γ((±λ+n−|l|)/2) / (Γ(λ)Γ(−λ)), with
/// 1/(Γ(λ)Γ(−λ)) = −λ sin(πλ)/π.
pub fn c_product_inv(lambda: Cx, n: u32, l: i32) -> Result<Cx> {
    let p = ChiParam::new(n, l)?;
    let (nf, lf) = (n as f64, p.big_l() as f64);
    let g = |z: Cx| gamma(z);
    let num = g((lambda + nf + lf) / 2.0)? * g((lambda + nf - lf) / 2.0)? * g((-lambda + nf + lf) / 2.0)? * g((-lambda + nf - lf) / 2.0)?;
    let gn = gamma(Cx::new(nf, 0.0))?;
    let scale = (-2.0 * (nf + lf) * std::f64::consts::LN_2).exp() / (gn * gn);
    Ok(scale * num * (-lambda * sin_pi(lambda) / PI))
}

/// Which case table builds p_{n,l}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PTable {
    /// Four cases by the parities of n and l, as tabulated.
    Printed,
    /// Two cases by the parity of ρ = n+|l|, from the duplication and
    /// reflection formulas.
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QKind {
    Tan,
    Cot,
}

/// 1/(c c₋) = γ_{n,l} p_{n,l}(λ) q_{n,l}(λ).
#[derive(Debug, Clone, PartialEq)]
pub struct CProductParts {
    pub n: u32,
    pub l: i32,
    pub table: PTable,
    pub gamma_nl: f64,
    /// p = λ^e Π (λ² − r²) over these r.
    pub power: u32,
    pub roots: Vec<i64>,
    /// Coefficients of p, ascending.
    pub p_poly: Vec<f64>,
    pub q_kind: QKind,
}

fn span(lo: i64, hi: i64) -> impl Iterator<Item = i64> {
    lo..=hi
}

/// Builds γ, p and q for (n, l).
pub fn gamma_pq(n: u32, l: i32, table: PTable) -> Result<CProductParts> {
    let p = ChiParam::new(n, l)?;
    let (n_, l_) = (n as i64, p.big_l() as i64);
    let rho = n_ + l_;
    let (power, roots): (u32, Vec<i64>) = match table {
        PTable::Printed => match (n_ % 2, l_ % 2) {
            (1, 0) => (
                1,
                span(1, (n_ - l_ - 1) / 2)
                    .map(|j| n_ - l_ - 2 * j)
                    .chain(span(1, (n_ + l_ - 1) / 2).map(|j| n_ + l_ - 2 * j))
                    .collect(),
            ),
            (0, 0) => (
                3,
                span(1, (n_ + l_) / 2 - 1)
                    .map(|j| n_ + l_ - 2 * j)
                    .chain(span(1, (n_ - l_) / 2 - 1).map(|j| n_ - l_ - 2 * j))
                    .collect(),
            ),
            (1, 1) => (
                3,
                span(1, (n_ + l_) / 2 - 1)
                    .map(|j| n_ + l_ - 1 - 2 * j)
                    .chain(span(1, (n_ - l_) / 2).map(|j| n_ - l_ - 2 * j))
                    .collect(),
            ),
            _ => (
                1,
                span(1, (n_ + l_ - 1) / 2)
                    .map(|j| n_ + l_ - 2 * j)
                    .chain(span(1, (n_ - l_ - 3) / 2).map(|j| n_ - l_ - 2 * j))
                    .collect(),
            ),
        },
        PTable::Corrected => {
            if rho % 2 == 1 {
                (
                    1,
                    span(1, (rho - 1) / 2)
                        .map(|j| rho - 2 * j)
                        .chain(span(1, (n_ - l_ - 1) / 2).map(|j| n_ - l_ - 2 * j))
                        .collect(),
                )
            } else {
                (
                    3,
                    span(1, rho / 2 - 1)
                        .map(|j| rho - 2 * j)
                        .chain(span(1, (n_ - l_) / 2 - 1).map(|j| n_ - l_ - 2 * j))
                        .collect(),
                )
            }
        }
    };
    // λ^e Π (λ² − r²), ascending coefficients
    let mut poly = vec![0.0; power as usize + 1];
    poly[power as usize] = 1.0;
    for &r in &roots {
        let mut next = vec![0.0; poly.len() + 2];
        for (k, c) in poly.iter().enumerate() {
            next[k + 2] += c;
            next[k] -= c * (r * r) as f64;
        }
        poly = next;
    }
    let gn = gamma(Cx::new(n as f64, 0.0))?.re;
    let mag = PI * (-(4.0 * n as f64 + 2.0 * l_ as f64 - 3.0) * std::f64::consts::LN_2).exp() / (gn * gn);
    let gamma_nl = if l_ % 2 == 0 { -mag } else { mag };
    let q_kind = if rho % 2 == 1 { QKind::Tan } else { QKind::Cot };
    Ok(CProductParts { n, l, table, gamma_nl, power, roots, p_poly: poly, q_kind })
}

impl CProductParts {
    /// p_{n,l}(λ) by Horner.
    pub fn p(&self, lambda: Cx) -> Cx {
        self.p_poly.iter().rev().fold(Cx::new(0.0, 0.0), |acc, &c| acc * lambda + c)
    }

    /// p_{n,l}(k) exactly for integer k.
    pub fn p_int(&self, k: i64) -> i128 {
        let mut v = (k as i128).pow(self.power);
        for &r in &self.roots {
            v *= (k * k - r * r) as i128;
        }
        v
    }

    pub fn q(&self, lambda: Cx) -> Result<Cx> {
        let (s, c) = (sin_pi(lambda / 2.0), cos_pi(lambda / 2.0));
        let (num, den) = match self.q_kind {
            QKind::Tan => (s, c),
            QKind::Cot => (c, s),
        };
        if den.norm() < 1e-15 {
            return Err(Error::Pole { at: lambda });
        }
        Ok(num / den)
    }

    /// γ p(λ) q(λ).
    pub fn eval(&self, lambda: Cx) -> Result<Cx> {
        Ok(self.gamma_nl * self.p(lambda) * self.q(lambda)?)
    }

    pub fn degree(&self) -> usize {
        self.p_poly.len() - 1
    }
}

/// How α in the dimension formula is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaPolicy {
    /// α = weyl_dim_oracle(n, l, 0).
    Weyl,
    Value(i128),
}

/// d_m = α p_{n,l}(2m+n+|l|) / p_{n,l}(n+|l|), exactly. The tangent or
/// cotangent ratio is 1 at these points (period 2).
pub fn dim_chi_l(n: u32, l: i32, m: u32, alpha: AlphaPolicy) -> Result<Ratio<i128>> {
    dim_chi_l_table(n, l, m, alpha, PTable::Corrected)
}

pub fn dim_chi_l_table(n: u32, l: i32, m: u32, alpha: AlphaPolicy, table: PTable) -> Result<Ratio<i128>> {
    let parts = gamma_pq(n, l, table)?;
    let rho = (n + l.unsigned_abs()) as i64;
    let den = parts.p_int(rho);
    if den == 0 {
        return Err(Error::Degenerate(format!("p_{{n,l}}(n+|l|) = 0 for (n, l) = ({n}, {l})")));
    }
    let alpha = match alpha {
        AlphaPolicy::Weyl => weyl_dim_oracle(n, l, 0)? as i128,
        AlphaPolicy::Value(a) => a,
    };
    Ok(Ratio::new(alpha * parts.p_int(2 * m as i64 + rho), den))
}

/// Highest weight of π_{2m+|l|} as a partition of length n+1:
/// (2m+|l|, m, …, m, 0), i.e. (m+|l|)ε₁ − mε_{n+1} shifted by m.
pub fn chi_l_partition(n: u32, l: i32, m: u32) -> Vec<u64> {
    let big_l = l.unsigned_abs() as u64;
    let m = m as u64;
    let mut part = vec![m; n as usize + 1];
    part[0] = 2 * m + big_l;
    part[n as usize] = 0;
    part
}

/// Weyl dimension Π_{i<j} (λ_i − λ_j + j − i)/(j − i) of the SU(n+1)
/// representation with highest weight [`chi_l_partition`].
pub fn weyl_dim_oracle(n: u32, l: i32, m: u32) -> Result<u64> {
    if n < 1 {
        return Err(Error::domain("n must be ≥ 1"));
    }
    weyl_dim(&chi_l_partition(n, l, m))
}

/// Weyl dimension for a partition (non-increasing).
pub fn weyl_dim(part: &[u64]) -> Result<u64> {
    if part.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::domain(format!("{part:?} is not a dominant weight")));
    }
    let mut d = Ratio::from_integer(1i128);
    for i in 0..part.len() {
        for j in (i + 1)..part.len() {
            let num = part[i] as i128 - part[j] as i128 + (j - i) as i128;
            d *= Ratio::new(num, (j - i) as i128);
        }
    }
    if !d.is_integer() || d <= Ratio::from_integer(0) {
        return Err(Error::Invariant(format!("Weyl dimension {d} is not a positive integer")));
    }
    Ok(d.to_integer() as u64)
}

/// Number of semistandard tableaux of the given shape with entries ≤ k.
pub fn ssyt_count(shape: &[u64], k: u64) -> u64 {
    let shape: Vec<usize> = shape.iter().map(|&x| x as usize).filter(|&x| x > 0).collect();
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<u64>> = shape.iter().map(|&len| vec![0; len]).collect();
    fn fill(idx: usize, cells: &[(usize, usize)], grid: &mut Vec<Vec<u64>>, k: u64) -> u64 {
        if idx == cells.len() {
            return 1;
        }
        let (r, c) = cells[idx];
        let lo_row = if c > 0 { grid[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        let mut total = 0;
        for v in lo_row.max(lo_col)..=k {
            grid[r][c] = v;
            total += fill(idx + 1, cells, grid, k);
        }
        total
    }
    fill(0, &cells, &mut grid, k)
}

pub type MatN = DMatrix<Cx>;

/// I_{1,n} = diag(1, −1, …, −1).
pub fn i_1n(n: usize) -> MatN {
    let mut m = MatN::identity(n + 1, n + 1);
    for k in 1..=n {
        m[(k, k)] = Cx::new(-1.0, 0.0);
    }
    m
}

/// x*I_{1,n}x = I_{1,n} and det x = 1 to `tol`.
pub fn check_su1n(x: &MatN, tol: f64) -> Result<()> {
    let n = x.nrows() - 1;
    if x.ncols() != n + 1 || n < 1 {
        return Err(Error::NotInGroup("matrix is not square".into()));
    }
    let j = i_1n(n);
    let defect = (x.adjoint() * &j * x - &j).norm();
    let det = x.determinant();
    if defect > tol * (1.0 + x.norm().powi(2)) || (det - 1.0).norm() > tol * (1.0 + x.norm().powi(n as i32 + 1)) {
        return Err(Error::NotInGroup(format!("form defect {defect:e}, det {det}")));
    }
    Ok(())
}

/// a_t = exp(tH), H coupling the first and last coordinates.
pub fn a_t_su1n(n: usize, t: Cx) -> MatN {
    let mut m = MatN::identity(n + 1, n + 1);
    m[(0, 0)] = t.cosh();
    m[(n, n)] = t.cosh();
    m[(0, n)] = t.sinh();
    m[(n, 0)] = t.sinh();
    m
}

/// k = diag((det U)^{−1}, U) for U ∈ U(n).
pub fn k_su1n(u: &MatN) -> MatN {
    let n = u.nrows();
    let mut m = MatN::zeros(n + 1, n + 1);
    m[(0, 0)] = u.determinant().inv();
    m.view_mut((1, 1), (n, n)).copy_from(u);
    m
}

/// exp(X_z + Y_s) ∈ N: with v± = (e₀ ± e_n)/√2, X_z v₋ = z, X_z w = ⟨w, z⟩ v₊
/// for w ⊥ v±, and Y_s v₋ = i s v₊. N fixes v₊.
pub fn n_su1n(z: &DVector<Cx>, s: f64) -> MatN {
    let n = z.len() + 1;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut vp = DVector::zeros(n + 1);
    vp[0] = Cx::new(r, 0.0);
    vp[n] = Cx::new(r, 0.0);
    let mut vm = DVector::zeros(n + 1);
    vm[0] = Cx::new(r, 0.0);
    vm[n] = Cx::new(-r, 0.0);
    let mut zz = DVector::zeros(n + 1);
    zz.rows_mut(1, n - 1).copy_from(z);
    let m = &zz * vm.adjoint() + &vp * zz.adjoint() + &vp * vm.adjoint() * Cx::new(0.0, s);
    let m2 = &m * &m;
    MatN::identity(n + 1, n + 1) + &m + m2 * Cx::new(0.5, 0.0)
}

/// Iwasawa data of x = k a_t n: e^{H(x)} and χ₁(K(x)) = det U.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su1nIwasawa {
    pub e_h: f64,
    pub chi: Cx,
}

/// With v₊ = e₀ + e_n (fixed by N, eigenvalue e^t under a_t):
/// x v₊ = e^t k v₊, so e^{H} = ‖x v₊‖/‖v₊‖ and χ₁(K(x)) = e^{H}/(x v₊)₀.
pub fn iwasawa_su1n(x: &MatN) -> Result<Su1nIwasawa> {
    check_su1n(x, 1e-10)?;
    let n = x.nrows() - 1;
    let w: DVector<Cx> = x.column(0) + x.column(n);
    let e_h = w.norm() / std::f64::consts::SQRT_2;
    let chi = Cx::new(e_h, 0.0) / w[0];
    Ok(Su1nIwasawa { e_h, chi })
}

/// φ_{λ,l}(a_t) = (cosh t)^{|l|} φ^{(n−1,|l|)}_λ(t), |Im t| ≤ 0.3. A
/// cancellation loss down to 1e-8 relative (1e-12 absolute near zeros) is
/// accepted.
pub fn phi_chi_l(lambda: Cx, param: ChiParam, t: Cx) -> Result<Cx> {
    let big_l = param.big_l();
    let core = match jacobi_phi(param.n as f64 - 1.0, big_l as f64, lambda, t) {
        Err(Error::Accuracy { best, err }) if err <= 1e-8 * best.norm().max(1e-4) => best,
        r => r?,
    };
    Ok(t.cosh().powu(big_l) * core)
}

/// φ_{λ,l}(a_t) from the K-integral, reduced to the unit disc: with
/// z = det(U)·u_n distributed as (n−1)(1−|z|²)^{n−2}/π,
///
/// ```text
/// φ = ∫_D (cosh t + z sinh t)^l E^{−(λ+n+l)/2} dν(z),
/// E = (cosh 2t (1+|z|²) + 2 sinh 2t Re z + 1 − |z|²)/2.
/// ```
///
/// The angle is integrated by the trapezoid rule (periodic), the radius
/// adaptively.
pub fn phi_chi_l_oracle(lambda: Cx, param: ChiParam, t: f64) -> Result<Cx> {
    let n = param.n as f64;
    let l = param.l;
    let (ch, sh) = (t.cosh(), t.sinh());
    let (ch2, sh2) = ((2.0 * t).cosh(), (2.0 * t).sinh());
    let expo = -(lambda + n + l as f64) / 2.0;
    let ring = |r: f64, nodes: usize| -> Cx {
        let mut acc = Cx::new(0.0, 0.0);
        for k in 0..nodes {
            let al = 2.0 * PI * k as f64 / nodes as f64;
            let z = Cx::from_polar(r, al);
            let e = (ch2 * (1.0 + r * r) + 2.0 * sh2 * z.re + 1.0 - r * r) / 2.0;
            acc += (Cx::new(ch, 0.0) + z * sh).powi(l) * (expo * e.ln()).exp();
        }
        acc / nodes as f64
    };
    let angular = |r: f64| -> Cx {
        let mut nodes = 32;
        let mut prev = ring(r, nodes);
        loop {
            nodes *= 2;
            let next = ring(r, nodes);
            if (next - prev).norm() <= 1e-13 * next.norm().max(1e-300) || nodes >= 4096 {
                return next;
            }
            prev = next;
        }
    };
    let weight = |r: f64| 2.0 * (n - 1.0) * (1.0 - r * r).powf(n - 2.0) * r;
    let est = integrate(|r| angular(r) * weight(r), 0.0, 1.0, QuadTol::new(1e-11, 1e-10))?;
    Ok(est.value)
}

/// Spherical transform pair for χ_l-radial profiles.
///
/// f̂(λ) = ∫_0^∞ f(a_t) φ_{λ,l}(a_t) (sinh t)^{2(n−1)} sinh 2t dt and
/// f(a_t) = κ ∫_ℝ f̂(iμ) φ_{iμ,l}(a_t) / (c(iμ)c(−iμ)) dμ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su1nTransform {
    pub param: ChiParam,
    pub kappa: f64,
    pub tol: QuadTol,
}

/// κ in closed form for the normalizations of [`Su1nTransform`]:
/// 2^{2n+2|l|−3}/π.
pub fn kappa_chi_analytic(param: ChiParam) -> f64 {
    2f64.powi(2 * param.n as i32 + 2 * param.big_l() as i32 - 3) / PI
}

/// Tabulated inversion prefactors: 1/(2·4^{n|l|}) and 1/(2·4^{|l|}).
pub fn kappa_chi_printed(param: ChiParam) -> [(&'static str, f64); 2] {
    let (n, l) = (param.n as i32, param.big_l() as i32);
    [("1/(2*4^(n|l|))", 0.5 / 4f64.powi(n * l)), ("1/(2*4^|l|)", 0.5 / 4f64.powi(l))]
}

impl Su1nTransform {
    pub fn new(param: ChiParam, kappa: f64) -> Self {
        Su1nTransform { param, kappa, tol: QuadTol::new(1e-10, 1e-10) }
    }

    pub fn transform(&self, f: &dyn RadialProfile, lambda: Cx) -> Result<Cx> {
        let n = self.param.n as f64;
        let decay = f.decay().ok_or_else(|| Error::domain("profile has no decay certificate"))?;
        // |φ_λ| (sinh t)^{2(n−1)} sinh 2t ≤ C e^{(|Re λ| + n + 0.1) t}
        let end = decay.truncation(lambda.re.abs() + n + 0.1, self.tol.abs / 10.0)?;
        let panels = ((end / 0.5).ceil() as usize).max(1);
        let breaks: Vec<f64> = (0..=panels).map(|j| end * j as f64 / panels as f64).collect();
        let err = std::cell::Cell::new(None);
        let est = integrate_panels(
            |t| {
                let v = f.eval(t);
                if v == Cx::new(0.0, 0.0) {
                    return v;
                }
                match phi_chi_l(lambda, self.param, Cx::new(t, 0.0)) {
                    Ok(p) => v * p * t.sinh().powi(2 * (self.param.n as i32 - 1)) * (2.0 * t).sinh(),
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
        Ok(est.value)
    }

    /// Inversion at a_t; `cert` bounds |f̂(iμ) φ_{iμ,l}(a_t)/(c c₋)(iμ)|.
    pub fn invert(&self, fh: &(dyn Fn(Cx) -> Cx + Sync), cert: DecayCertificate, t: f64) -> Result<Cx> {
        let err = std::cell::Cell::new(None);
        let line = integrate_vertical_line(
            |l| {
                let v = phi_chi_l(l, self.param, Cx::new(t, 0.0))
                    .and_then(|p| Ok(p * c_product_inv(l, self.param.n, self.param.l)?));
                match v {
                    Ok(v) => fh(l) * v,
                    Err(e) => {
                        err.set(Some(e));
                        Cx::new(0.0, 0.0)
                    }
                }
            },
            0.0,
            self.tol,
            cert,
        )?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        // dλ = i dμ on iℝ
        Ok(self.kappa * line.value / Cx::i())
    }
}

/// Transform, then inversion, on a t-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTripChi {
    pub ts: Vec<f64>,
    pub original: Vec<Cx>,
    pub recovered: Vec<Cx>,
    pub max_rel_err: f64,
}

pub fn round_trip_chi(tr: &Su1nTransform, f: &dyn RadialProfile, ts: &[f64]) -> Result<RoundTripChi> {
    let first_err = std::sync::Mutex::new(None);
    let memo = Memo::new(|l: Cx| match tr.transform(f, l) {
        Ok(v) => v,
        Err(e) => {
            first_err.lock().expect("error slot").get_or_insert(e);
            Cx::new(0.0, 0.0)
        }
    });
    let (n, l) = (tr.param.n, tr.param.l);
    let recovered = crate::par::try_map(ts, |&t| {
        let g = |y: f64| {
            let lam = Cx::new(0.0, y);
            let w = phi_chi_l(lam, tr.param, Cx::new(t, 0.0))
                .and_then(|p| Ok(p * c_product_inv(lam, n, l)?))
                .unwrap_or(Cx::new(f64::NAN, 0.0));
            memo.get(lam) * w
        };
        // the fitted rate already absorbs the polynomial growth of 1/(c c₋)
        let rate = fitted_rate(|y| g(y).norm(), &[8.0, 10.0]).min(4.0);
        let cert = DecayCertificate::fitted(g, rate, 0.0, &[1.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        tr.invert(&|l| memo.get(l), cert, t)
    })?;
    if let Some(e) = first_err.into_inner().expect("error slot") {
        return Err(e);
    }
    let original: Vec<Cx> = ts.iter().map(|&t| f.eval(t)).collect();
    let scale = original.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let max_rel_err = recovered
        .iter()
        .zip(&original)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale.max(f64::MIN_POSITIVE);
    Ok(RoundTripChi { ts: ts.to_vec(), original, recovered, max_rel_err })
}

/// Local exponential rate of |g| between the last two heights. For
/// transforms of Gaussian-type profiles the decay only speeds up further
/// out, so the rate bounds the tail.
fn fitted_rate<G: Fn(f64) -> f64>(g: G, heights: &[f64]) -> f64 {
    let (h0, h1) = (heights[heights.len() - 2], heights[heights.len() - 1]);
    let (a, b) = (g(h0).max(f64::MIN_POSITIVE), g(h1).max(f64::MIN_POSITIVE));
    ((a / b).ln() / (h1 - h0)).max(0.5)
}

/// Result of the single-κ calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaChi {
    pub param: ChiParam,
    pub kappa: f64,
    pub analytic: f64,
    /// κ for the density (2 sinh t)^{2(n−1)} (2 sinh 2t), i.e. κ/2^{2n−1}.
    pub kappa_two_power_density: f64,
    /// Tabulated prefactors with their ratios to κ and to the two-power κ.
    pub printed: Vec<(String, f64, f64, f64)>,
    /// Name of the tabulated prefactor that agrees to 1e-3, if any.
    pub matches: Option<String>,
}

/// Fixes κ from the round trip of `f` at `t0` with κ = 1.
pub fn calibrate_kappa_chi(param: ChiParam, f: &dyn RadialProfile, t0: f64) -> Result<KappaChi> {
    let unit = Su1nTransform::new(param, 1.0);
    let rt = round_trip_chi(&unit, f, &[t0])?;
    let kappa = rt.original[0].re / rt.recovered[0].re;
    let two_power = kappa / 2f64.powi(2 * param.n as i32 - 1);
    let printed: Vec<(String, f64, f64, f64)> =
        kappa_chi_printed(param).iter().map(|(s, v)| (s.to_string(), *v, kappa / v, two_power / v)).collect();
    let matches = printed
        .iter()
        .find_map(|p| {
            if (p.2 - 1.0).abs() < 1e-3 {
                Some(p.0.clone())
            } else if (p.3 - 1.0).abs() < 1e-3 {
                Some(format!("{} (two-power density)", p.0))
            } else {
                None
            }
        });
    Ok(KappaChi { param, kappa, analytic: kappa_chi_analytic(param), kappa_two_power_density: two_power, printed, matches })
}

fn grid_constant(samples: Vec<(f64, String)>) -> GridConstant {
    let n = samples.len();
    let (constant, worst) = samples
        .into_iter()
        .fold((0.0, String::new()), |acc, (c, w)| if c > acc.0 || c.is_nan() { (c, w) } else { acc });
    GridConstant { constant, worst, samples: n }
}

/// Grid constant for |ψ_{2m+|l|}(a_t)| ≤ C e^{(2m+|l|)t}, ψ = φ at
/// λ = 2m+|l|+n, t ∈ [0, 3].
pub fn psi_growth_certificate(params: &[ChiParam], ms: &[u32]) -> Result<GridConstant> {
    let mut pts = Vec::new();
    for &p in params {
        for &m in ms {
            for j in 0..=12 {
                pts.push((p, m, 0.25 * j as f64));
            }
        }
    }
    let vals = crate::par::try_map(&pts, |&(p, m, t)| -> Result<(f64, String)> {
        let k = 2 * m + p.big_l();
        let v = phi_chi_l(Cx::new((k + p.n) as f64, 0.0), p, Cx::new(t, 0.0))?.norm();
        Ok((v / (k as f64 * t).exp(), format!("n={} l={} m={m} t={t}", p.n, p.l)))
    })?;
    Ok(grid_constant(vals))
}

/// Grid constant for |φ_{λ₁+iλ₂,l}(a_{t+is})| ≤ C e^{|l||t|} e^{|λ₁||t|+|λ₂||s|},
/// t ∈ [0, 3], |s| ≤ 0.25.
pub fn strip_certificate_chi(params: &[ChiParam]) -> Result<GridConstant> {
    let mut pts = Vec::new();
    for &p in params {
        for l in bound_lambda_grid() {
            for j in 0..=6 {
                for s in [0.0, 0.125, -0.125, 0.25, -0.25] {
                    pts.push((p, l, 0.5 * j as f64, s));
                }
            }
        }
    }
    let vals = crate::par::try_map(&pts, |&(p, l, t, s)| -> Result<(f64, String)> {
        let v = phi_chi_l(l, p, Cx::new(t, s))?.norm();
        let env = (p.big_l() as f64 * t + l.re.abs() * t + l.im.abs() * s.abs()).exp();
        Ok((v / env, format!("n={} l={} lambda={l} t={t} s={s}", p.n, p.l)))
    })?;
    Ok(grid_constant(vals))
}

/// Compact-side check of ψ_{2m+|l|} = φ_{2m+|l|+n,l} at imaginary time iθ:
/// conjugate symmetry between ±iθ and |ψ| ≤ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictionCheck {
    pub max_conj_err: f64,
    pub max_abs: f64,
}

pub fn restriction_check(param: ChiParam, ms: &[u32], thetas: &[f64]) -> Result<RestrictionCheck> {
    let mut out = RestrictionCheck { max_conj_err: 0.0, max_abs: 0.0 };
    for &m in ms {
        let lam = Cx::new((2 * m + param.big_l() + param.n) as f64, 0.0);
        for &th in thetas {
            let a = phi_chi_l(lam, param, Cx::new(0.0, th))?;
            let b = phi_chi_l(lam, param, Cx::new(0.0, -th))?;
            out.max_conj_err = out.max_conj_err.max((a - b.conj()).norm());
            out.max_abs = out.max_abs.max(a.norm()).max(b.norm());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx;
    use crate::profile::{FnProfile, ProfileDecay};
    use rand::{Rng, SeedableRng};

    fn all_params(max_n: u32) -> Vec<ChiParam> {
        (2..=max_n)
            .flat_map(|n| (-(n as i32) + 1..n as i32).map(move |l| ChiParam::new(n, l).unwrap()))
            .collect()
    }

    #[test]
    fn root_data_examples() {
        let r = structure_constants(2, 1).unwrap();
        assert_eq!((r.m_beta, r.m_2beta, r.rho, r.m_plus, r.rho_plus), (2.0, 1.0, 2.0, (0.0, 3.0), 3.0));
        let r = structure_constants(3, 0).unwrap();
        assert_eq!((r.m_plus, r.rho_plus), ((4.0, 1.0), 3.0));
        assert_eq!(structure_constants(3, 2).unwrap().rho_plus, 5.0);
        assert!(structure_constants(3, 3).is_err());
        assert!(structure_constants(3, -3).is_err());
    }

    #[test]
    fn c_normalized_at_rho() {
        for p in all_params(6) {
            let r = structure_constants(p.n, p.l).unwrap();
            let c = c_fn(cx(r.rho_plus, 0.0), r.m_plus).unwrap();
            assert!((c - 1.0).norm() < 1e-12, "{p:?}: {c}");
        }
        let r = structure_constants(3, 0).unwrap();
        assert!((c_fn(cx(r.rho, 0.0), (r.m_beta, r.m_2beta)).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn c_product_matches_direct_and_is_even() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for p in all_params(5) {
            let m = structure_constants(p.n, p.l).unwrap().m_plus;
            for _ in 0..10 {
                let l = cx(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let direct = 1.0 / (c_fn(l, m).unwrap() * c_fn(-l, m).unwrap());
                let q = c_product_inv(l, p.n, p.l).unwrap();
                assert!((q - direct).norm() < 1e-10 * q.norm(), "{p:?} {l}");
                assert!((q - c_product_inv(-l, p.n, p.l).unwrap()).norm() < 1e-12 * q.norm());
            }
            for y in [0.5, 1.0, 3.0] {
                let v = c_product_inv(cx(0.0, y), p.n, p.l).unwrap();
                assert!(v.re >= 0.0 && v.im.abs() < 1e-12 * v.re, "{p:?} y={y}: {v}");
            }
        }
        assert_eq!(c_product_inv(cx(0.0, 0.0), 3, 0).unwrap(), cx(0.0, 0.0));
    }

    #[test]
    fn corrected_factorization_holds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in all_params(6) {
            let parts = gamma_pq(p.n, p.l, PTable::Corrected).unwrap();
            for _ in 0..20 {
                let l = cx(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let q = c_product_inv(l, p.n, p.l).unwrap();
                let g = parts.eval(l).unwrap();
                assert!((q - g).norm() <= 1e-9 * q.norm(), "{p:?} {l}: {q} vs {g}");
            }
        }
    }

    #[test]
    fn printed_table_agrees_exactly_where_expected() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for p in all_params(6) {
            let (printed, corrected) =
                (gamma_pq(p.n, p.l, PTable::Printed).unwrap(), gamma_pq(p.n, p.l, PTable::Corrected).unwrap());
            let l = cx(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let same = (printed.eval(l).unwrap() - corrected.eval(l).unwrap()).norm() <= 1e-9 * corrected.eval(l).unwrap().norm();
            let (n, big_l) = (p.n, p.big_l());
            let expected = match (n % 2, big_l % 2) {
                (1, 0) | (0, 0) => true,
                (0, 1) => n - big_l == 1,
                _ => false,
            };
            assert_eq!(same, expected, "{p:?}");
        }
        let p = gamma_pq(3, 2, PTable::Printed).unwrap();
        assert_eq!(p.q_kind, QKind::Tan);
        assert_eq!((p.power, p.roots.clone()), (1, vec![3, 1]));
        assert_eq!(gamma_pq(4, 2, PTable::Printed).unwrap().q_kind, QKind::Cot);
        assert_eq!(gamma_pq(3, 0, PTable::Printed).unwrap().p(cx(0.0, 0.0)), cx(0.0, 0.0));
    }

    #[test]
    fn dimensions_match_weyl() {
        for p in all_params(6) {
            for m in 0..=6 {
                let d = dim_chi_l(p.n, p.l, m, AlphaPolicy::Weyl).unwrap();
                let w = weyl_dim_oracle(p.n, p.l, m).unwrap();
                assert!(d.is_integer() && d.to_integer() == w as i128, "{p:?} m={m}: {d} vs {w}");
            }
        }
        assert_eq!(dim_chi_l(3, 0, 0, AlphaPolicy::Weyl).unwrap(), Ratio::from_integer(1));
        assert_eq!(dim_chi_l(3, 2, 0, AlphaPolicy::Value(7)).unwrap(), Ratio::from_integer(7));
    }

    #[test]
    fn weyl_oracle_checks() {
        // SU(2): dim π_N = N + 1
        for m in 0..5 {
            for l in 0..3 {
                assert_eq!(weyl_dim_oracle(1, l, m).unwrap(), (2 * m + l as u32 + 1) as u64);
            }
        }
        assert_eq!(weyl_dim_oracle(2, 0, 0).unwrap(), 1);
        // brute force by tableaux
        for (n, l, m) in [(2u32, 0i32, 1u32), (2, 1, 1), (3, 2, 1), (3, 0, 2)] {
            let part = chi_l_partition(n, l, m);
            assert_eq!(weyl_dim_oracle(n, l, m).unwrap(), ssyt_count(&part, n as u64 + 1), "{n} {l} {m}");
        }
        for p in all_params(4) {
            assert_eq!(weyl_dim_oracle(p.n, p.l, 3).unwrap(), weyl_dim_oracle(p.n, -p.l, 3).unwrap());
        }
        assert!(weyl_dim(&[1, 2]).is_err());
    }

    fn haar_unitary(n: usize, rng: &mut impl Rng) -> MatN {
        let mut normal = || {
            let (u1, u2): (f64, f64) = (rng.gen_range(f64::EPSILON..1.0), rng.gen());
            (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
        };
        let g = MatN::from_fn(n, n, |_, _| cx(normal(), normal()));
        let qr = g.qr();
        let (q, r) = (qr.q(), qr.r());
        let phases = MatN::from_diagonal(&DVector::from_fn(n, |i, _| r[(i, i)] / r[(i, i)].norm()));
        q * phases
    }

    #[test]
    fn iwasawa_recovers_factors() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.gen_range(2..5usize);
            let u = haar_unitary(n, &mut rng);
            let t = rng.gen_range(-2.0..2.0);
            let z = DVector::from_fn(n - 1, |_, _| cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let nn = n_su1n(&z, rng.gen_range(-1.0..1.0));
            check_su1n(&nn, 1e-12).unwrap();
            let x = k_su1n(&u) * a_t_su1n(n, cx(t, 0.0)) * nn;
            let iw = iwasawa_su1n(&x).unwrap();
            assert!((iw.e_h - f64::exp(t)).abs() < 1e-10 * f64::exp(t));
            assert!((iw.chi - u.determinant()).norm() < 1e-10);
        }
        let iw = iwasawa_su1n(&a_t_su1n(3, cx(0.7, 0.0))).unwrap();
        assert!((iw.e_h - 0.7f64.exp()).abs() < 1e-13 && (iw.chi - 1.0).norm() < 1e-13);
        let mut bad = a_t_su1n(2, cx(0.5, 0.0));
        bad[(0, 1)] = cx(0.1, 0.0);
        assert!(iwasawa_su1n(&bad).is_err());
    }

    #[test]
    fn phi_basic_properties() {
        let p = ChiParam::new(3, 2).unwrap();
        assert!((phi_chi_l(cx(0.3, 1.1), p, cx(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        for l in [cx(0.7, 0.0), cx(0.2, 1.5)] {
            let a = phi_chi_l(l, p, cx(0.8, 0.1)).unwrap();
            let b = phi_chi_l(-l, p, cx(0.8, 0.1)).unwrap();
            assert!((a - b).norm() < 1e-12 * a.norm());
        }
        assert!(phi_chi_l(cx(0.0, 1.0), p, cx(0.2, 0.31)).is_err());
    }

    #[test]
    fn oracle_matches_candidate() {
        for (n, l) in [(2u32, 0i32), (2, 1), (3, 2), (2, -1), (3, -2)] {
            let p = ChiParam::new(n, l).unwrap();
            for lam in [cx(0.0, 0.7), cx(1.0, 0.0)] {
                for t in [0.3, 0.8] {
                    let o = phi_chi_l_oracle(lam, p, t).unwrap();
                    let c = phi_chi_l(lam, p, cx(t, 0.0)).unwrap();
                    assert!((o - c).norm() < 1e-8, "{p:?} {lam} {t}: {o} vs {c}");
                }
            }
        }
        assert!((phi_chi_l_oracle(cx(0.0, 0.4), ChiParam::new(3, 1).unwrap(), 0.0).unwrap() - 1.0).norm() < 1e-10);
    }

    #[test]
    fn zero_profile_and_evenness() {
        let p = ChiParam::new(3, 2).unwrap();
        let tr = Su1nTransform::new(p, 1.0);
        let z = FnProfile::new(|_| cx(0.0, 0.0), ProfileDecay::Support { end: 1.0 });
        assert_eq!(tr.transform(&z, cx(0.0, 0.5)).unwrap(), cx(0.0, 0.0));
        let f = FnProfile::new(|t: f64| cx((-2.0 * t * t).exp(), 0.0), ProfileDecay::Gaussian { constant: 1.0, alpha: 2.0 });
        let a = tr.transform(&f, cx(0.3, 0.9)).unwrap();
        let b = tr.transform(&f, cx(-0.3, -0.9)).unwrap();
        assert!((a - b).norm() < 1e-10 * a.norm());
    }

    #[test]
    fn single_kappa_round_trips() {
        let p = ChiParam::new(3, 2).unwrap();
        let f1 = FnProfile::new(|t: f64| cx((-2.0 * t * t).exp(), 0.0), ProfileDecay::Gaussian { constant: 1.0, alpha: 2.0 });
        let k = calibrate_kappa_chi(p, &f1, 0.5).unwrap();
        assert!((k.kappa / k.analytic - 1.0).abs() < 1e-6, "{k:?}");
        let f2 = FnProfile::new(
            |t: f64| cx((1.0 + t * t) * (-3.0 * t * t).exp(), 0.0),
            ProfileDecay::Gaussian { constant: 2.0, alpha: 2.5 },
        );
        let tr = Su1nTransform::new(p, k.kappa);
        for f in [&f1 as &dyn RadialProfile, &f2] {
            let rt = round_trip_chi(&tr, f, &[0.0, 0.3, 0.6, 1.0]).unwrap();
            assert!(rt.max_rel_err < 1e-3, "{rt:?}");
        }
    }

    #[test]
    fn bound_certificates() {
        let ps = [ChiParam::new(2, 1).unwrap(), ChiParam::new(3, 2).unwrap(), ChiParam::new(3, 0).unwrap()];
        let g = psi_growth_certificate(&ps, &[0, 1, 2, 3]).unwrap();
        assert!(g.constant <= 2.0, "{g:?}");
        let s = strip_certificate_chi(&ps).unwrap();
        assert!(s.constant.is_finite() && s.constant <= 10.0, "{s:?}");
        let r = restriction_check(ps[1], &[0, 1, 2], &[0.1, 0.2, 0.3]).unwrap();
        assert!(r.max_conj_err < 1e-13 && r.max_abs <= 1.0 + 1e-12, "{r:?}");
    }
}

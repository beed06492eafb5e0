//! Polynomial representations π_m of SU(2) on homogeneous polynomials of
//! degree m, extended holomorphically to SL(2,C).
//!
//! The basis of 𝒫_m is ordered u^m, u^{m−1}v, …, v^m; index k carries the
//! monomial u^{m−k}v^k and the invariant weight k!(m−k)!/m!. These exact
//! matrix coefficients are the ground truth for the compact-dual spherical
//! functions ψ_{2m+n,n} and their growth bounds.

use crate::error::{Error, Result};
use crate::Cx;
use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};

pub type Mat2 = Matrix2<Cx>;

const DET_TOL: f64 = 1e-10;

/// diag(e^t, e^{−t}).
pub fn a_t(t: Cx) -> Mat2 {
    Mat2::new(t.exp(), Cx::new(0.0, 0.0), Cx::new(0.0, 0.0), (-t).exp())
}

/// Rotation k_θ = [[cos θ, sin θ], [−sin θ, cos θ]]; complex θ allowed.
pub fn k_theta(theta: Cx) -> Mat2 {
    let (c, s) = (theta.cos(), theta.sin());
    Mat2::new(c, s, -s, c)
}

/// Unipotent n_ξ = [[1, ξ], [0, 1]].
pub fn n_xi(xi: Cx) -> Mat2 {
    Mat2::new(Cx::new(1.0, 0.0), xi, Cx::new(0.0, 0.0), Cx::new(1.0, 0.0))
}

/// Rejects matrices whose determinant is not 1.
pub fn check_sl2c(g: &Mat2) -> Result<()> {
    let d = g.determinant();
    if (d - Cx::new(1.0, 0.0)).norm() > DET_TOL {
        return Err(Error::NotInGroup(format!("det = {d}, expected 1")));
    }
    Ok(())
}

/// Inverse of a determinant-one 2×2 matrix.
pub fn inv_sl2(g: &Mat2) -> Mat2 {
    Mat2::new(g[(1, 1)], -g[(0, 1)], -g[(1, 0)], g[(0, 0)])
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Invariant weights w_k = k!(m−k)!/m! = 1/C(m,k).
pub fn weights(m: usize) -> Vec<f64> {
    (0..=m).map(|k| 1.0 / binom(m, k)).collect()
}

/// Invariant Hermitian form on 𝒫_m.
pub fn inner(m: usize, x: &DVector<Cx>, y: &DVector<Cx>) -> Cx {
    weights(m)
        .iter()
        .zip(x.iter().zip(y.iter()))
        .map(|(w, (a, b))| *w * a * b.conj())
        .sum()
}

/// Coefficients of (αu + βv)^p indexed by power of v.
fn linear_power(alpha: Cx, beta: Cx, p: usize) -> Vec<Cx> {
    (0..=p)
        .map(|q| binom(p, q) * alpha.powu((p - q) as u32) * beta.powu(q as u32))
        .collect()
}

fn convolve(a: &[Cx], b: &[Cx]) -> Vec<Cx> {
    let mut out = vec![Cx::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Matrix of π_m(g)f(u,v) = f((u,v)g) in the monomial basis.
pub fn rep_matrix(m: usize, g: &Mat2) -> Result<DMatrix<Cx>> {
    check_sl2c(g)?;
    let (a, b, c, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let mut out = DMatrix::zeros(m + 1, m + 1);
    for k in 0..=m {
        // u^{m-k} v^k  ↦  (a u + c v)^{m-k} (b u + d v)^k
        let col = convolve(&linear_power(a, c, m - k), &linear_power(b, d, k));
        for (row, v) in col.into_iter().enumerate() {
            out[(row, k)] = v;
        }
    }
    Ok(out)
}

/// Polynomial (u²+v²)^{(N−|n|)/2}(u∓iv)^{|n|} that transforms by e^{−inθ}
/// under k_θ; the lower sign is used for n < 0.
pub fn n_spherical_vector(total: usize, n: i64) -> Result<DVector<Cx>> {
    let an = n.unsigned_abs() as usize;
    if total < an || !(total - an).is_multiple_of(2) {
        return Err(Error::NoSuchRepresentation(format!(
            "degree {total} has no {n}-spherical vector"
        )));
    }
    let one = Cx::new(1.0, 0.0);
    let zero = Cx::new(0.0, 0.0);
    let mut p = vec![one];
    for _ in 0..(total - an) / 2 {
        p = convolve(&p, &[one, zero, one]);
    }
    let lin = if n >= 0 { [one, -Cx::i()] } else { [one, Cx::i()] };
    for _ in 0..an {
        p = convolve(&p, &lin);
    }
    Ok(DVector::from_vec(p))
}

/// ψ_{2m+n,n}(g) = ⟨π(g^{−1})f, f⟩/⟨f, f⟩ for the n-spherical vector f of
/// π_{2m+n}. Requires 2m+n ≥ |n|.
pub fn psi_exact(m: usize, n: i64, g: &Mat2) -> Result<Cx> {
    let total = 2 * m as i64 + n;
    if total < n.abs() {
        return Err(Error::NoSuchRepresentation(format!("2m+n = {total} < |n| = {}", n.abs())));
    }
    let total = total as usize;
    let f = n_spherical_vector(total, n)?;
    let pf = rep_matrix(total, &inv_sl2(g))? * &f;
    Ok(inner(total, &pf, &f) / inner(total, &f, &f))
}

/// Factorization g = u · diag(e^t, e^{−t}) · k_w with u ∈ SU(2), t ≥ 0 and
/// w = φ + ib complex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactDualDecomposition {
    pub u: Mat2,
    pub t: f64,
    pub w: Cx,
}

impl CompactDualDecomposition {
    pub fn reconstruct(&self) -> Mat2 {
        self.u * a_t(Cx::new(self.t, 0.0)) * k_theta(self.w)
    }

    /// |e_n(h^{−1})| = |e^{−inw}| = e^{n Im w}.
    pub fn character_modulus(&self, n: i64) -> f64 {
        (Cx::new(0.0, -(n as f64)) * self.w).exp().norm()
    }
}

/// Decompose g ∈ SL(2,C) as u·a_t·k_w. From N = g*g = k_w* a_{2t} k_w the
/// imaginary angle b comes from the off-diagonal imaginary part, and the
/// real symmetric remainder is diagonalized by a real rotation.
pub fn decompose(g: &Mat2) -> Result<CompactDualDecomposition> {
    check_sl2c(g)?;
    let n = g.adjoint() * g;
    let re = n.map(|z| z.re);
    let tr = re.trace();
    let x = 2.0 * n[(0, 1)].im / tr;
    if x.abs() >= 1.0 {
        return Err(Error::domain("decompose: |tanh 2b| ≥ 1"));
    }
    let b = 0.5 * x.atanh();
    let tau = tr / (2.0 * b).cosh();
    let s = re - nalgebra::Matrix2::identity() * (b.sinh().powi(2) * tau);
    let eig = SymmetricEigen::new(s);
    let (i_big, i_small) = if eig.eigenvalues[0] >= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let big = eig.eigenvalues[i_big];
    if big <= 0.0 {
        return Err(Error::domain("decompose: non-positive eigenvalue"));
    }
    let mut q = nalgebra::Matrix2::from_columns(&[eig.eigenvectors.column(i_big), eig.eigenvectors.column(i_small)]);
    if q.determinant() < 0.0 {
        q.set_column(1, &(-q.column(1)));
    }
    // k_φ = qᵀ, so k_φ[0,1] = sin φ = q[1,0]
    let phi = q[(1, 0)].atan2(q[(0, 0)]);
    let t = 0.5 * big.ln();
    let w = Cx::new(phi, b);
    let hinv = k_theta(-w);
    let u = g * hinv * a_t(Cx::new(-t, 0.0));
    Ok(CompactDualDecomposition { u, t, w })
}

/// Outcome of the Hilbert–Schmidt and pointwise growth checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthCheck {
    pub hs_lhs: f64,
    pub hs_rhs: f64,
    pub psi_abs: f64,
    pub psi_bound: f64,
    /// Bound with h taken from the decomposition of g itself rather than of
    /// the operator acting in ψ(g); reported, not required.
    pub psi_bound_literal: f64,
    pub t: f64,
    pub pass: bool,
}

/// Σ_j |⟨π(g)f⁰, f^j⟩|² ≤ |e_n(h^{−1})|² e^{(4m+2n)t}, with f⁰ the unit
/// n-spherical vector and (u, t, h) from [`decompose`] of g.
///
/// The pointwise bound |ψ_{2m+n,n}(g)| ≤ e^{(2m+n)t}|e_n(h'^{−1})| is checked
/// with h' from the decomposition of (g^{−1})*, since
/// ψ(g) = ⟨π(g^{−1})f, f⟩ is the conjugate of ⟨π((g^{−1})*)f, f⟩.
pub fn hilbert_schmidt_bound_check(m: usize, n: i64, g: &Mat2) -> Result<GrowthCheck> {
    let total = 2 * m as i64 + n;
    if total < n.abs() {
        return Err(Error::NoSuchRepresentation(format!("2m+n = {total} < |n|")));
    }
    let total = total as usize;
    let dec = decompose(g)?;
    let f = n_spherical_vector(total, n)?;
    let f0 = &f / Cx::new(inner(total, &f, &f).re.sqrt(), 0.0);
    let pf = rep_matrix(total, g)? * &f0;
    let hs_lhs = inner(total, &pf, &pf).re;
    let e = dec.character_modulus(n);
    let exponent = (2 * m as i64 + n) as f64 * dec.t;
    let hs_rhs = e * e * (2.0 * exponent).exp();
    let psi_abs = psi_exact(m, n, g)?.norm();
    let acting = decompose(&inv_sl2(g).adjoint())?;
    let psi_bound = ((2 * m as i64 + n) as f64 * acting.t).exp() * acting.character_modulus(n);
    let psi_bound_literal = exponent.exp() * e;
    let slack = 1.0 + 1e-10;
    Ok(GrowthCheck {
        hs_lhs,
        hs_rhs,
        psi_abs,
        psi_bound,
        psi_bound_literal,
        t: dec.t,
        pass: hs_lhs <= hs_rhs * slack && psi_abs <= psi_bound * slack,
    })
}

/// Dimension of the e^{−inθ}-eigenspace of π_N(k_θ), by SVD nullity.
pub fn spherical_multiplicity(total: usize, n: i64, theta: f64) -> Result<usize> {
    let k = rep_matrix(total, &k_theta(Cx::new(theta, 0.0)))?;
    let shift = DMatrix::identity(total + 1, total + 1) * Cx::from_polar(1.0, -(n as f64) * theta);
    let sv = (k - shift).singular_values();
    Ok(sv.iter().filter(|&&s| s < 1e-9).count())
}

//! Monte Carlo check of the χ_l-spherical function against its defining
//! K-integral, sampling Haar-random U(n) and projecting with the Iwasawa
//! decomposition.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmt_core::su1n::{a_t_su1n, iwasawa_su1n, k_su1n, phi_chi_l, ChiParam};
use rmt_core::{cx, Cx};
use std::f64::consts::PI;

fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Ginibre matrix, QR, phases of R moved into Q.
fn haar_unitary(n: usize, rng: &mut impl Rng) -> DMatrix<Cx> {
    let g = DMatrix::from_fn(n, n, |_, _| cx(normal(rng), normal(rng)));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    q * DMatrix::from_diagonal(&DVector::from_fn(n, |i, _| r[(i, i)] / r[(i, i)].norm()))
}

/// φ_{λ,l}(a_t) = ∫_K e^{−(λ+n)H(a_t k)} χ_l(K(a_t k))^{−1} χ_l(k) dk, with
/// mean and standard error.
fn monte_carlo(lambda: Cx, param: ChiParam, t: f64, samples: usize, seed: u64) -> (Cx, f64) {
    let n = param.n as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let at = a_t_su1n(n, cx(t, 0.0));
    let (mut sum, mut sq) = (Cx::new(0.0, 0.0), 0.0);
    for _ in 0..samples {
        let u = haar_unitary(n, &mut rng);
        let det = u.determinant();
        let iw = iwasawa_su1n(&(&at * k_su1n(&u))).unwrap();
        let v = (-(lambda + n as f64) * iw.e_h.ln()).exp() * (det / iw.chi).powi(param.l);
        sum += v;
        sq += v.norm_sqr();
    }
    let mean = sum / samples as f64;
    let var = (sq / samples as f64 - mean.norm_sqr()).max(0.0);
    (mean, (var / samples as f64).sqrt())
}

#[test]
fn haar_average_matches_closed_form() {
    for (n, l) in [(2u32, 0i32), (2, 1), (3, 2), (3, -2)] {
        let param = ChiParam::new(n, l).unwrap();
        for (lambda, t) in [(cx(0.0, 0.7), 0.5), (cx(1.0, 0.0), 0.3)] {
            let (mc, se) = monte_carlo(lambda, param, t, 20_000, 7 + n as u64);
            let exact = phi_chi_l(lambda, param, cx(t, 0.0)).unwrap();
            assert!((mc - exact).norm() <= 5.0 * se + 1e-3, "n={n} l={l} λ={lambda} t={t}: {mc} ± {se} vs {exact}");
        }
    }
}

#[test]
fn haar_samples_are_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 2..5 {
        let u = haar_unitary(n, &mut rng);
        assert!((u.adjoint() * &u - DMatrix::identity(n, n)).norm() < 1e-12);
    }
}

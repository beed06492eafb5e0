//! Growth and strip estimates for the spherical functions, each reduced to
//! the smallest constant that holds on a declared grid.

use super::group;
use crate::config::Resolved;
use crate::report::{Case, Check, SuiteReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmt_core::sl2::{growth_certificate, strip_certificate, GridConstant};
use rmt_core::su1n::{psi_growth_certificate, restriction_check, strip_certificate_chi, ChiParam};
use rmt_core::su2::{a_t, hilbert_schmidt_bound_check, k_theta, Mat2};
use rmt_core::{cx, par, Error};

/// Largest constant a certificate may need.
const MAX_CONSTANT: f64 = 10.0;
const SLACK: f64 = 1e-10;

pub(crate) fn run(r: &Resolved, out: &mut SuiteReport) {
    let ns = [0i64, 1, -1, 2, -2];
    let params: Vec<ChiParam> = [(2u32, 1i32), (3, 2), (3, 0)].iter().filter_map(|&(n, l)| ChiParam::new(n, l).ok()).collect();

    group(r, "hilbert-schmidt", out, |out| hilbert_schmidt(r.seed, out));
    group(r, "growth", out, |out| {
        out.cases.push(certificate("growth/sl2", growth_certificate(&ns), "|Φ| / ((1+t) e^{(|Re λ|−1)t})"));
    });
    group(r, "strip", out, |out| {
        out.cases.push(certificate("strip/sl2", strip_certificate(&ns), "|Φ| / e^{2|n|t + |λ₁|t + |λ₂||s|}"));
    });
    group(r, "growth-chi", out, |out| {
        out.cases.push(certificate("growth/su1n", psi_growth_certificate(&params, &[0, 1, 2, 3]), "|ψ_{2m+L}| / e^{(2m+L)t}"));
    });
    group(r, "strip-chi", out, |out| {
        out.cases.push(certificate("strip/su1n", strip_certificate_chi(&params), "|φ| / e^{L|t| + |λ₁||t| + |λ₂||s|}"));
    });
    group(r, "restriction", out, |out| {
        for p in &params {
            let name = format!("restriction/n={}/l={}", p.n, p.l);
            match restriction_check(*p, &[0, 1, 2], &[0.1, 0.2, 0.3]) {
                Ok(c) => {
                    out.cases.push(
                        Case::compare_real::<Error>(format!("{name}/modulus"), Ok(c.max_abs), Ok(1.0 + SLACK), Check::AtMost, SLACK)
                            .from("max |ψ(a_{iθ})| on the compact side", "1"),
                    );
                    out.cases.push(
                        Case::compare_real::<Error>(format!("{name}/conjugation"), Ok(c.max_conj_err), Ok(0.0), Check::Abs, 1e-13)
                            .from("max |ψ(a_{iθ}) − conj ψ(a_{−iθ})|", "0"),
                    );
                }
                Err(e) => out.cases.push(Case::failed(name, e, 0.0)),
            }
        }
    });
}

fn certificate(name: &str, g: Result<GridConstant, Error>, ratio: &str) -> Case {
    match g {
        Ok(g) => {
            let finite = g.constant.is_finite();
            let case = Case::compare_real::<Error>(name, Ok(g.constant), Ok(MAX_CONSTANT), Check::AtMost, 0.0)
                .from(&format!("max over grid of {ratio}"), "C ≤ 10")
                .constant("C", g.constant)
                .input("samples", g.samples)
                .note(format!("attained at {}", g.worst));
            if finite {
                case
            } else {
                Case { pass: false, ..case }.note("non-finite constant")
            }
        }
        Err(e) => Case::failed(name, e, 0.0),
    }
}

/// Hilbert–Schmidt and pointwise bounds for π_{2m+n}(g) on the n-spherical
/// vector over Cartan points and seeded random elements of SL(2,C).
fn hilbert_schmidt(seed: u64, out: &mut SuiteReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gs: Vec<(String, Mat2)> = Vec::new();
    for t in [0.0, 0.5, 1.0, 2.0] {
        gs.push((format!("a_{t}"), a_t(cx(t, 0.0))));
        gs.push((format!("k_0.7 a_{t} k_0.3"), k_theta(cx(0.7, 0.0)) * a_t(cx(t, 0.0)) * k_theta(cx(0.3, 0.0))));
    }
    for j in 0..8 {
        let mut x = || cx(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let g = Mat2::new(x(), x(), x(), x());
        let d = g.determinant();
        if d.norm() > 1e-3 {
            gs.push((format!("random_{j}"), g / d.sqrt()));
        }
    }
    let mut pts = Vec::new();
    for n in 0..=3i64 {
        for m in 0..=3usize {
            for (label, g) in &gs {
                pts.push((m, n, label.clone(), *g));
            }
        }
    }
    let checks = par::map(&pts, |(m, n, _, g)| hilbert_schmidt_bound_check(*m, *n, g));
    let (mut hs, mut psi, mut fails) = (0.0f64, 0.0f64, Vec::new());
    for ((m, n, label, _), c) in pts.iter().zip(checks) {
        match c {
            Ok(c) => {
                hs = hs.max(c.hs_lhs / c.hs_rhs);
                psi = psi.max(c.psi_abs / c.psi_bound);
            }
            Err(e) => fails.push(format!("m={m} n={n} g={label}: {e}")),
        }
    }
    let mut hs_case = Case::compare_real::<Error>("hilbert-schmidt/norm", Ok(hs), Ok(1.0 + SLACK), Check::AtMost, SLACK)
        .from("max Σ_j |⟨π(g)f⁰, f^j⟩|² / (|e_n(h⁻¹)|² e^{(4m+2n)t})", "1")
        .input("samples", pts.len());
    let mut psi_case = Case::compare_real::<Error>("hilbert-schmidt/pointwise", Ok(psi), Ok(1.0 + SLACK), Check::AtMost, SLACK)
        .from("max |ψ_{2m+n,n}(g)| / (e^{(2m+n)t} |e_n(h⁻¹)|)", "1")
        .input("samples", pts.len());
    if !fails.is_empty() {
        let why = fails.join("; ");
        hs_case = Case { pass: false, ..hs_case }.note(why.clone());
        psi_case = Case { pass: false, ..psi_case }.note(why);
    }
    out.cases.push(hs_case);
    out.cases.push(psi_case);
}

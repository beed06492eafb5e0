//! χ_l-radial functions on SU(1,n): spherical-function oracle, κ
//! calibration and inversion, and the master theorem three ways.

use super::{all_failed, fmt_cx, group, push_note};
use crate::config::Resolved;
use crate::report::{Case, Check, Curve, Summary, SuiteReport};
use rmt_core::hardy::HardyFunction;
use rmt_core::master_su1n::MasterSu1n;
use rmt_core::profile::{FnProfile, ProfileDecay, RadialProfile};
use rmt_core::su1n::{calibrate_kappa_chi, phi_chi_l, phi_chi_l_oracle, round_trip_chi, ChiParam, KappaChi, Su1nTransform};
use rmt_core::{cx, par, Cx, Error};

const ORACLE_TOL: f64 = 1e-3;
const ROUND_TRIP_TOL: f64 = 1e-3;
const KAPPA_TOL: f64 = 1e-6;
const THREE_WAY_TOL: f64 = 1e-4;
const ETA_TOL: f64 = 1e-6;
const RESIDUE_TOL: f64 = 1e-8;

fn gaussian() -> FnProfile<impl Fn(f64) -> Cx + Sync> {
    FnProfile::new(|t: f64| cx((-2.0 * t * t).exp(), 0.0), ProfileDecay::Gaussian { constant: 1.0, alpha: 2.0 })
}

fn bump() -> FnProfile<impl Fn(f64) -> Cx + Sync> {
    FnProfile::new(
        |t: f64| cx((1.0 + t * t) * (-3.0 * t * t).exp(), 0.0),
        ProfileDecay::Gaussian { constant: 2.0, alpha: 2.5 },
    )
}

pub(crate) fn run(r: &Resolved, out: &mut SuiteReport, summary: &mut Summary) {
    let a = r.a.clone().unwrap_or_else(|| HardyFunction::exp(1.0));
    let primary = match (r.n, r.l) {
        (Some(n), Some(l)) => (n as u32, l),
        (Some(n), None) => (n as u32, n as i32 - 1),
        (None, Some(l)) => ((l.unsigned_abs() + 1).max(2), l),
        (None, None) => (3, 2),
    };
    let primary = match ChiParam::new(primary.0, primary.1) {
        Ok(p) => p,
        Err(e) => {
            out.cases.push(Case::failed("parameters", e, 0.0));
            return;
        }
    };
    out.notes.push(format!("a = {}, primary (n, l) = ({}, {})", a.name, primary.n, primary.l));

    group(r, "oracle", out, |out| oracle(r, out));

    // κ is needed by the round trip even when its own cases are off
    let needs_kappa = r.enabled("kappa") || r.enabled("round-trip");
    let kappa = needs_kappa.then(|| calibrate_kappa_chi(primary, &gaussian(), 0.5));
    if r.enabled("kappa") {
        if let Some(k) = &kappa {
            kappa_cases(primary, k, out, summary);
        }
    }
    group(r, "round-trip", out, |out| {
        let tol = r.tol_or(ROUND_TRIP_TOL);
        let k = match kappa.as_ref().expect("computed above") {
            Ok(k) => k.kappa,
            Err(e) => {
                out.cases.extend(all_failed(["round-trip/gaussian".into(), "round-trip/bump".into()], &e.to_string(), tol));
                return;
            }
        };
        let tr = Su1nTransform::new(primary, k);
        let ts = [0.0, 0.3, 0.6, 1.0];
        let g = gaussian();
        let b = bump();
        for (name, f) in [("gaussian", &g as &dyn RadialProfile), ("bump", &b)] {
            let case_name = format!("round-trip/{name}");
            match round_trip_chi(&tr, f, &ts) {
                Ok(rt) => {
                    out.curves.push(
                        Curve::new(format!("round-trip/{name}"), "t", rt.ts.clone())
                            .column("original", rt.original.iter().map(|z| z.re).collect())
                            .column("recovered", rt.recovered.iter().map(|z| z.re).collect()),
                    );
                    out.cases.push(
                        Case::compare_real::<Error>(case_name, Ok(rt.max_rel_err), Ok(tol), Check::AtMost, tol)
                            .from("relative L∞ error of the inverted transform", "tolerance")
                            .input("n", primary.n)
                            .input("l", primary.l)
                            .constant("kappa", k),
                    );
                }
                Err(e) => out.cases.push(Case::failed(case_name, e, tol)),
            }
        }
    });

    let m = match MasterSu1n::new(primary) {
        Ok(m) => m,
        Err(e) => {
            out.cases.push(Case::failed("master/setup", e, 0.0));
            return;
        }
    };

    group(r, "series-contour", out, |out| {
        let tol = r.tol_or(THREE_WAY_TOL);
        let eta = r.eta.unwrap_or(0.0);
        let ts = [0.0, 0.1, 0.2, 0.3, 0.4];
        let vals = par::map(&ts, |&t| (m.series(&a, t, 1e-13).map(|s| s.value), m.contour_rhs(&a, t, eta)));
        out.curves.push(
            Curve::new(format!("series-vs-contour/n={}/l={}", primary.n, primary.l), "t", ts.to_vec())
                .column("series", vals.iter().map(|v| v.0.as_ref().map_or(f64::NAN, |z| z.re)).collect())
                .column("contour", vals.iter().map(|v| v.1.as_ref().map_or(f64::NAN, |z| z.re)).collect()),
        );
        for (&t, (s, c)) in ts.iter().zip(vals) {
            if t != 0.2 && t != 0.4 {
                continue;
            }
            out.cases.push(
                Case::compare(format!("series-contour/t={t}"), s, c, Check::Rel, tol)
                    .from("spectral series Σ (−1)^m d_m a(2m+ρ) φ", "contour integral of (aB + a(−·)B(−·)) φ")
                    .input("n", primary.n)
                    .input("l", primary.l)
                    .input("t", t)
                    .input("eta", eta),
            );
        }
    });

    group(r, "eta", out, |out| {
        let tol = r.tol_or(ETA_TOL);
        let etas: Vec<f64> = r.eta.map_or_else(|| vec![0.5 * a.delta, 0.9 * a.delta], |e| vec![e]);
        let t = 0.3;
        let base = m.contour_integral(&a, t, 0.0);
        let cases = par::map(&etas, |&eta| {
            Case::compare(format!("eta/eta={eta}"), m.contour_integral(&a, t, eta), base.clone(), Check::Abs, tol)
                .from("contour at Re λ = −η", "contour at Re λ = 0")
                .input("t", t)
        });
        out.cases.extend(cases);
    });

    group(r, "transform", out, |out| {
        let tol = r.tol_or(THREE_WAY_TOL);
        let lambdas = [cx(0.0, 0.5), cx(0.0, 1.0)];
        let names = lambdas.iter().map(|l| format!("transform/lambda={}", fmt_cx(*l)));
        match m.transform_identity_check(&a, &lambdas) {
            Ok(ti) => {
                summary.kappa.insert(format!("su1n(n={},l={}) analytic", primary.n, primary.l), ti.kappa);
                for ((name, l), (x, y)) in names.zip(&ti.lambdas).zip(ti.lhs.iter().zip(&ti.rhs)) {
                    out.cases.push(
                        Case::compare::<Error>(name, Ok(*x), Ok(*y), Check::Rel, tol)
                            .from("−iκ f̂(λ) of the contour extension", "a(λ)b(λ) + a(−λ)b(−λ)")
                            .input("lambda", fmt_cx(*l))
                            .constant("kappa", ti.kappa),
                    );
                }
            }
            Err(e) => out.cases.extend(all_failed(names, &e.to_string(), tol)),
        }
    });

    group(r, "residues", out, |out| {
        let tol = r.tol_or(RESIDUE_TOL);
        let ms = [0usize, 1, 2, 3];
        match m.residue_assembly(&a, 0.3, &ms) {
            Ok(terms) => {
                for term in terms {
                    out.cases.push(
                        Case::compare::<Error>(format!("residues/m={}", term.m), Ok(term.assembled), Ok(term.series_term), Check::Rel, tol)
                            .from("−4πi Res a B φ at ρ+2m", "series term (−1)^m d_m a φ")
                            .input("t", 0.3),
                    );
                }
            }
            Err(e) => out.cases.extend(all_failed(ms.iter().map(|m| format!("residues/m={m}")), &e.to_string(), tol)),
        }
    });
}

/// Closed form against the K-integral oracle.
fn oracle(r: &Resolved, out: &mut SuiteReport) {
    let tol = r.tol_or(ORACLE_TOL);
    let pairs: Vec<(u32, i32)> = match (r.n, r.l) {
        (Some(n), Some(l)) => vec![(n as u32, l)],
        (Some(n), None) => (-(n as i32) + 1..n as i32).map(|l| (n as u32, l)).collect(),
        (None, Some(l)) => [2u32, 3].into_iter().filter(|&n| l.unsigned_abs() < n).map(|n| (n, l)).collect(),
        (None, None) => vec![(2, 0), (2, 1), (3, 2)],
    };
    let mut pts = Vec::new();
    for &(n, l) in &pairs {
        for lam in [cx(0.0, 0.7), cx(1.0, 0.0)] {
            for t in [0.3, 0.8] {
                pts.push((n, l, lam, t));
            }
        }
    }
    let cases = par::map(&pts, |&(n, l, lam, t)| {
        let name = format!("oracle/n={n}/l={l}/lambda={}/t={t}", fmt_cx(lam));
        match ChiParam::new(n, l) {
            Ok(p) => Case::compare(name, phi_chi_l(lam, p, cx(t, 0.0)), phi_chi_l_oracle(lam, p, t), Check::Abs, tol)
                .from("closed form cosh^L t · φ^{(n−1,L)}_λ(t)", "K-integral oracle")
                .input("n", n)
                .input("l", l)
                .input("lambda", fmt_cx(lam))
                .input("t", t),
            Err(e) => Case::failed(name, e, tol),
        }
    });
    out.cases.extend(cases);
}

fn kappa_cases(p: ChiParam, k: &Result<KappaChi, Error>, out: &mut SuiteReport, summary: &mut Summary) {
    let name = format!("kappa/n={}/l={}", p.n, p.l);
    let k = match k {
        Ok(k) => k,
        Err(e) => {
            out.cases.push(Case::failed(name, e, KAPPA_TOL));
            return;
        }
    };
    summary.kappa.insert(format!("su1n(n={},l={})", p.n, p.l), k.kappa);
    let mut case = Case::compare_real::<Error>(name, Ok(k.kappa), Ok(k.analytic), Check::Rel, KAPPA_TOL)
        .from("κ from the round trip of e^{−2t²} at t = 0.5", "2^{2n+2L−3}/π")
        .input("n", p.n)
        .input("l", p.l)
        .constant("two_power_density", k.kappa_two_power_density);
    for (label, value, ratio, ratio2) in &k.printed {
        case = case
            .constant(&format!("printed {label}"), *value)
            .constant(&format!("ratio to printed {label}"), *ratio)
            .constant(&format!("two-power ratio to printed {label}"), *ratio2);
    }
    out.cases.push(case);
    let listing: Vec<String> =
        k.printed.iter().map(|(label, _, ratio, ratio2)| format!("{label}: κ ratio {ratio:.4e}, two-power ratio {ratio2:.4e}")).collect();
    let verdict = match &k.matches {
        Some(m) => format!("matches printed prefactor {m}"),
        None => "matches no printed prefactor".into(),
    };
    let note = format!(
        "su1n (n={}, l={}): calibrated κ = {:.10} ({verdict}); analytic 2^{{2n+2L−3}}/π = {:.10}; {}",
        p.n,
        p.l,
        k.kappa,
        k.analytic,
        listing.join("; ")
    );
    out.notes.push(note.clone());
    push_note(summary, note);
}

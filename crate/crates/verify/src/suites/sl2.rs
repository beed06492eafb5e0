//! Line bundles over SL(2,R)/SO(2): compact-dual identity, the master
//! theorem on both sides of the inversion formula, and the rectangle
//! bookkeeping behind the contour shift.

use super::{all_failed, fmt_cx, group, push_note};
use crate::config::Resolved;
use crate::report::{Case, Check, Curve, Summary, SuiteReport};
use rmt_core::hardy::HardyFunction;
use rmt_core::master_sl2::{resolve_series_variant, MasterSl2, SeriesPoint, SeriesVariant};
use rmt_core::sl2::{calibrate_kappa, phi_nn, CartanPoint, Sl2Kernel, KAPPA_SL2};
use rmt_core::su2::{a_t, psi_exact};
use rmt_core::{cx, par, Error};
use std::f64::consts::PI;

const COMPACT_TOL: f64 = 1e-9;
const SERIES_TOL: f64 = 1e-5;
const ETA_TOL: f64 = 1e-6;
const RECT_TOL: f64 = 1e-8;
/// Allowed factor between observed and predicted edge decay.
const EDGE_FACTOR: f64 = 3.0;

pub(crate) fn run(r: &Resolved, out: &mut SuiteReport, summary: &mut Summary) {
    let a = r.a.clone().unwrap_or_else(|| HardyFunction::exp(1.0));
    let ns: Vec<i64> = r.n.map_or_else(|| vec![2, 3, -2], |n| vec![n]);
    let kernel = match Sl2Kernel::validated(4) {
        Ok(k) => k,
        Err(e) => {
            out.cases.push(Case::failed("kernel/validation", &e, 0.0));
            Sl2Kernel::KIntegral
        }
    };
    out.notes.push(format!("a = {}, kernel {kernel:?}", a.name));

    group(r, "compact-dual", out, |out| compact_dual(r, out));

    let ts: Vec<f64> = (0..=4).map(|j| 0.2 * j as f64).collect();
    group(r, "series-contour", out, |out| {
        let tol = r.tol_or(SERIES_TOL);
        for &n in &ns {
            let m = MasterSl2::new(n, kernel);
            let eta = r.eta.unwrap_or(0.0);
            let vals = par::map(&ts, |&t| {
                let s = m.series(&a, SeriesPoint::Cartan(CartanPoint::real(t)), 1e-13).map(|v| v.value);
                (s, m.contour_rhs(&a, t, eta))
            });
            let mut curve = Curve::new(format!("series-vs-contour/n={n}"), "t", ts.clone());
            curve = curve
                .column("series", vals.iter().map(|v| v.0.as_ref().map_or(f64::NAN, |z| z.re)).collect())
                .column("contour", vals.iter().map(|v| v.1.as_ref().map_or(f64::NAN, |z| z.re)).collect());
            out.curves.push(curve);
            for (&t, (s, c)) in ts.iter().zip(vals) {
                out.cases.push(
                    Case::compare(format!("series-contour/n={n}/t={t:.1}"), s, c, Check::Rel, tol)
                        .from("spectral series", "contour integral + discrete terms")
                        .input("n", n)
                        .input("t", t)
                        .input("eta", eta),
                );
            }
        }
    });

    group(r, "eta", out, |out| {
        let tol = r.tol_or(ETA_TOL);
        let etas: Vec<f64> = r.eta.map_or_else(|| vec![a.delta / 4.0, a.delta / 2.0], |e| vec![e]);
        for &n in &ns {
            let m = MasterSl2::new(n, kernel);
            let pts: Vec<(f64, f64)> = [0.0, 0.4].iter().flat_map(|&t| etas.iter().map(move |&e| (t, e))).collect();
            let base = par::map(&[0.0, 0.4], |&t| m.contour_integral(&a, t, 0.0));
            let cases = par::map(&pts, |&(t, eta)| {
                let b = base[if t == 0.0 { 0 } else { 1 }].clone();
                Case::compare(format!("eta/n={n}/t={t}/eta={eta}"), m.contour_integral(&a, t, eta), b, Check::Abs, tol)
                    .from("contour at Re λ = −η", "contour at Re λ = 0")
                    .input("n", n)
                    .input("t", t)
                    .input("eta", eta)
            });
            out.cases.extend(cases);
        }
    });

    if r.enabled("transform") || r.enabled("discrete") {
        transform(r, &a, &ns, kernel, out, summary);
    }

    group(r, "variant", out, |out| {
        for &n in ns.iter().filter(|&&n| n < 0) {
            let name = format!("variant/n={n}");
            match resolve_series_variant(&a, n, kernel, &[0.0, 0.4], r.tol_or(SERIES_TOL)) {
                Ok(v) => {
                    let mut case = Case::compare_real::<Error>(name, Ok(v.consistent.len() as f64), Ok(1.0), Check::Exact, 0.0)
                        .from("number of series weightings matching the contour side", "exactly one")
                        .input("n", n);
                    for (var, e) in &v.mismatch {
                        case = case.constant(&format!("mismatch_{}", variant_name(*var)), *e);
                    }
                    let chosen: Vec<&str> = v.consistent.iter().map(|v| variant_name(*v)).collect();
                    push_note(
                        summary,
                        format!(
                            "sl2 n={n}: series weight resolved to [{}]; mismatches {}",
                            chosen.join(", "),
                            v.mismatch.iter().map(|(v, e)| format!("{}={e:.2e}", variant_name(*v))).collect::<Vec<_>>().join(", ")
                        ),
                    );
                    out.cases.push(case);
                }
                Err(e) => out.cases.push(Case::failed(name, e, 0.0)),
            }
        }
    });

    group(r, "rectangle", out, |out| {
        let Some(&n) = ns.iter().find(|&&n| n > 0) else { return };
        rectangle(r, &a, n, kernel, out);
    });
}

fn variant_name(v: SeriesVariant) -> &'static str {
    match v {
        SeriesVariant::Weighted => "weighted",
        SeriesVariant::Unweighted => "unweighted",
    }
}

/// ψ_{2m+n,n}(a_t) from the SU(2) representation against Φ^{n,n}_{2m+n+1}(a_t).
fn compact_dual(r: &Resolved, out: &mut SuiteReport) {
    let tol = r.tol_or(COMPACT_TOL);
    let ns: Vec<i64> = r.n.map_or_else(|| (0..=3).collect(), |n| vec![n]);
    let mut pts = Vec::new();
    for &n in &ns {
        for m in 0..=3usize {
            if 2 * m as i64 + n < n.abs() {
                continue;
            }
            for j in 0..=8 {
                pts.push((n, m, 0.25 * j as f64));
            }
        }
    }
    let cases = par::map(&pts, |&(n, m, t)| {
        let lam = (2 * m as i64 + n + 1) as f64;
        Case::compare(
            format!("compact-dual/n={n}/m={m}/t={t}"),
            psi_exact(m, n, &a_t(cx(t, 0.0))),
            phi_nn(cx(lam, 0.0), n, CartanPoint::real(t)),
            Check::Abs,
            tol,
        )
        .from("SU(2) matrix coefficient ψ_{2m+n,n}(a_t)", "K-integral Φ^{n,n}_{2m+n+1}(a_t)")
        .input("n", n)
        .input("m", m)
        .input("t", t)
    });
    out.cases.extend(cases);
    out.cases.push(
        Case::compare(
            "compact-dual/desk",
            phi_nn(cx(2.0, 0.0), 1, CartanPoint::real(0.5)),
            Ok::<_, Error>(cx(0.5f64.cosh(), 0.0)),
            Check::Abs,
            tol,
        )
        .from("Φ^{1,1}_2(a_0.5)", "cosh 0.5"),
    );
}

fn transform(r: &Resolved, a: &HardyFunction, ns: &[i64], kernel: Sl2Kernel, out: &mut SuiteReport, summary: &mut Summary) {
    let tol = r.tol_or(SERIES_TOL);
    let lambdas = [cx(0.0, 0.5), cx(0.0, 1.0), cx(0.0, 1.5)];
    summary.kappa.insert("sl2".into(), KAPPA_SL2);
    if r.enabled("transform") {
        let name = "transform/kappa".to_string();
        match calibrate_kappa(kernel) {
            Ok(k) => out.cases.push(
                Case::compare_real::<Error>(name, Ok(k.kappa), Ok(KAPPA_SL2), Check::Rel, 1e-6)
                    .from("κ from the n = 0 round trip of e^{−2t²}", "2π")
                    .constant("grid_round_trip_rel_err", k.max_rel_err),
            ),
            Err(e) => out.cases.push(Case::failed(name, e, 1e-6)),
        }
    }
    for &n in ns {
        let m = MasterSl2::new(n, kernel);
        let names = lambdas.iter().map(|l| format!("transform/n={n}/lambda={}", fmt_cx(*l)));
        match m.transform_identity_check(a, &lambdas) {
            Ok(ti) => {
                if r.enabled("transform") {
                    for ((name, l), (x, y)) in names.zip(&ti.lambdas).zip(ti.lhs.iter().zip(&ti.rhs)) {
                        out.cases.push(
                            Case::compare::<Error>(name, Ok(*x), Ok(*y), Check::Rel, tol)
                                .from("H f(λ)/4π² of the contour extension", "(a b + a(−·) b(−·))(λ)/2")
                                .input("n", n)
                                .input("lambda", fmt_cx(*l)),
                        );
                    }
                }
                if r.enabled("discrete") {
                    for (k, got, want) in &ti.discrete {
                        out.cases.push(
                            Case::compare::<Error>(format!("discrete/n={n}/k={k}"), Ok(*got), Ok(*want), Check::Rel, tol)
                                .from("discrete coefficient of the extension /2π", "(−1)^{(k−n−1)/2} a(k)")
                                .input("n", n)
                                .input("k", k),
                        );
                    }
                }
            }
            Err(e) => {
                let why = e.to_string();
                if r.enabled("transform") {
                    out.cases.extend(all_failed(names, &why, tol));
                }
                if r.enabled("discrete") && n > 0 {
                    out.cases.push(Case::failed(format!("discrete/n={n}"), &why, tol));
                }
            }
        }
    }
}

fn rectangle(r: &Resolved, a: &HardyFunction, n: i64, kernel: Sl2Kernel, out: &mut SuiteReport) {
    let tol = r.tol_or(RECT_TOL);
    let m = MasterSl2::new(n, kernel);
    let ks = [2i64, 3, 4];
    let checks = par::map(&ks, |&k| m.rectangle_residue_check(a, 0.0, k));
    let mut horizontal = Vec::new();
    for (&k, c) in ks.iter().zip(&checks) {
        let name = format!("rectangle/n={n}/k={k}");
        match c {
            Ok(c) => {
                let h = c.edge_abs[0] + c.edge_abs[2];
                horizontal.push(Some(h));
                out.cases.push(
                    Case::compare::<Error>(name, Ok(c.contour), Ok(c.residue_sum), Check::Abs, tol)
                        .from("∮ a b μ Φ over [0, 2k] × [−2k, 2k]", "2πi Σ residues")
                        .input("n", n)
                        .input("k", k)
                        .constant("edge_bottom", c.edge_abs[0])
                        .constant("edge_right", c.edge_abs[1])
                        .constant("edge_top", c.edge_abs[2])
                        .constant("edge_left", c.edge_abs[3]),
                );
            }
            Err(e) => {
                horizontal.push(None);
                out.cases.push(Case::failed(name, e, tol));
            }
        }
    }
    // height grows by 2 per step, so the horizontal edges shrink by e^{2(A−π/2)}
    let predicted = (2.0 * (a.growth - PI / 2.0)).exp();
    for (j, w) in horizontal.windows(2).enumerate() {
        let (k0, k1) = (ks[j], ks[j + 1]);
        let name = format!("rectangle/edge-ratio/k={k0}->{k1}");
        let case = match (w[0], w[1]) {
            (Some(h0), Some(h1)) => {
                let q = (h1 / h0) / predicted;
                Case::compare_real::<Error>(name, Ok(q.max(1.0 / q)), Ok(EDGE_FACTOR), Check::AtMost, 0.0)
                    .from("observed/predicted horizontal-edge ratio (folded ≥ 1)", "allowed factor")
                    .constant("observed", h1 / h0)
                    .constant("predicted", predicted)
            }
            _ => Case::failed(name, "rectangle integral failed", 0.0),
        };
        out.cases.push(case);
    }
    let ok: Vec<(f64, f64)> = ks.iter().zip(&horizontal).filter_map(|(&k, h)| h.map(|h| (k as f64, h))).collect();
    out.curves.push(
        Curve::new(format!("rectangle-edges/n={n}"), "k", ok.iter().map(|p| p.0).collect())
            .column("horizontal_abs", ok.iter().map(|p| p.1).collect())
            .column("predicted", ok.iter().map(|p| ok[0].1 * predicted.powf(p.0 - ok[0].0)).collect()),
    );
}

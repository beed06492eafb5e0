//! Scalar master theorem: Mellin transform of the interpolated series and
//! the contour reconstruction of f.

use super::{fmt_cx, group};
use crate::config::Resolved;
use crate::report::{Case, Check, Curve, SuiteReport};
use rmt_core::hardy::HardyFunction;
use rmt_core::master_sl2::ClassicalMaster;
use rmt_core::par;
use rmt_core::special_fn::sin_pi;
use rmt_core::{cx, Cx};
use std::f64::consts::PI;

const TOL: f64 = 1e-6;

pub(crate) fn run(r: &Resolved, out: &mut SuiteReport) {
    let a = r.a.clone().unwrap_or_else(HardyFunction::gamma_reciprocal);
    let mut cm = ClassicalMaster::new(&a);
    if let Some(eta) = r.eta {
        cm.eta = eta;
    }
    let tol = r.tol_or(TOL);
    out.notes.push(format!("a = {}, contour abscissa −{}", a.name, cm.eta));

    group(r, "mellin", out, |out| {
        let lambdas: Vec<Cx> = [0.1, 0.25, 0.4]
            .iter()
            .flat_map(|&re| (-2..=2).map(move |im| cx(re, im as f64)))
            .collect();
        let cases = par::map(&lambdas, |&l| {
            let want = -PI / sin_pi(l) * a.eval(l);
            Case::compare(format!("mellin/lambda={}", fmt_cx(l)), cm.mellin(l), Ok::<_, rmt_core::Error>(want), Check::Abs, tol)
                .from("∫₀^∞ f(x) x^{−λ−1} dx", "−(π/sin πλ) a(λ)")
                .input("lambda", fmt_cx(l))
        });
        out.cases.extend(cases);
    });

    group(r, "reconstruction", out, |out| {
        let xs = [0.5, 1.0, 2.0];
        let cases = par::map(&xs, |&x| {
            // the series where it converges, else the contour on a second line
            let (lhs, from) = if x * (-a.p).exp() < 0.9 {
                (cm.series(x), "Σ (−1)^k a(k) x^k")
            } else {
                (cm.f(x), "contour at Re λ = −0.9δ")
            };
            Case::compare(format!("reconstruction/x={x}"), lhs, cm.contour(x, cm.eta), Check::Abs, tol)
                .from(from, "(1/2πi) ∫ (−π/sin πλ) a(λ) x^λ dλ")
                .input("x", x)
        });
        let plot: Vec<f64> = (1..=20).map(|j| 0.125 * j as f64).collect();
        let vals = par::map(&plot, |&x| {
            let s = if x * (-a.p).exp() < 0.9 { cm.series(x).map(|v| v.re).unwrap_or(f64::NAN) } else { f64::NAN };
            (s, cm.contour(x, cm.eta).map(|v| v.re).unwrap_or(f64::NAN))
        });
        out.curves.push(
            Curve::new("reconstruction", "x", plot)
                .column("series", vals.iter().map(|v| v.0).collect())
                .column("contour", vals.iter().map(|v| v.1).collect()),
        );
        out.cases.extend(cases);
    });
}

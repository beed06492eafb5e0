//! Harish-Chandra c-function of the shifted multiplicities: Gamma form
//! against the γ·p·q factorization, normalization at ρ, and the dimension
//! formula against the Weyl oracle.

use super::{fmt_cx, group, push_note};
use crate::config::{default_su1n_ns, Resolved, Suite};
use crate::report::{Case, Check, Summary, SuiteReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmt_core::su1n::{c_fn, dim_chi_l, gamma_pq, structure_constants, weyl_dim_oracle, AlphaPolicy, PTable};
use rmt_core::{cx, par, Cx, Error};

const FACTOR_TOL: f64 = 1e-9;
const NORM_TOL: f64 = 1e-12;

fn pairs(ns: &[i64], l: Option<i32>) -> Vec<(u32, i32)> {
    ns.iter()
        .flat_map(|&n| {
            let n = n as i32;
            (-n + 1..n).filter(move |&x| l.is_none_or(|l| l == x)).map(move |x| (n as u32, x))
        })
        .collect()
}

pub(crate) fn run(r: &Resolved, out: &mut SuiteReport, summary: &mut Summary) {
    let ns = r.n.map_or_else(|| default_su1n_ns(Suite::CCalculus), |n| vec![n]);
    let all = pairs(&ns, r.l);

    group(r, "factorization", out, |out| {
        let tol = r.tol_or(FACTOR_TOL);
        // one stream per (n, l) so a single pair reproduces its samples
        let cases = par::map(&all, |&(n, l)| {
            let mut rng = ChaCha8Rng::seed_from_u64(r.seed ^ ((n as u64) << 32) ^ (l as i64 as u64));
            let lambdas: Vec<Cx> =
                (0..r.samples).map(|_| cx(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).collect();
            factorization_case(n, l, &lambdas, tol)
        });
        out.cases.extend(cases);
        let disagree: Vec<String> = all
            .iter()
            .filter(|&&(n, l)| printed_differs(n, l))
            .map(|(n, l)| format!("({n},{l})"))
            .collect();
        push_note(
            summary,
            format!(
                "c-calculus: printed p-table differs from the Gamma form at {}; corrected table used",
                if disagree.is_empty() { "no tested (n,l)".into() } else { disagree.join(" ") }
            ),
        );
    });

    group(r, "normalization", out, |out| {
        let tol = r.tol_or(NORM_TOL);
        for &(n, l) in &all {
            let name = format!("normalization/n={n}/l={l}");
            let case = match structure_constants(n, l) {
                Ok(rd) => Case::compare(name, c_fn(cx(rd.rho_plus, 0.0), rd.m_plus), Ok::<_, Error>(cx(1.0, 0.0)), Check::Abs, tol)
                    .from("c(ρ(m₊), m₊)", "1")
                    .constant("rho_plus", rd.rho_plus),
                Err(e) => Case::failed(name, e, tol),
            };
            out.cases.push(case.input("n", n).input("l", l));
        }
    });

    group(r, "dimension", out, |out| {
        let dims = r.n.map_or_else(|| vec![2, 3], |n| vec![n]);
        for (n, l) in pairs(&dims, r.l) {
            for m in 0..=4u32 {
                let name = format!("dimension/n={n}/l={l}/m={m}");
                let got = dim_chi_l(n, l, m, AlphaPolicy::Weyl);
                let want = weyl_dim_oracle(n, l, m);
                let case = match (got, want) {
                    (Ok(d), Ok(w)) if d.is_integer() => {
                        Case::compare_real::<Error>(name, Ok(*d.numer() as f64), Ok(w as f64), Check::Exact, 0.0)
                    }
                    (Ok(d), Ok(w)) => Case::compare_real::<Error>(name, Ok(*d.numer() as f64 / *d.denom() as f64), Ok(w as f64), Check::Exact, 0.0)
                        .note(format!("non-integer dimension {d}")),
                    (Err(e), _) | (_, Err(e)) => Case::failed(name, e, 0.0),
                };
                out.cases.push(
                    case.from("α · p-ratio dimension formula", "Weyl dimension of the SU(n+1) highest weight")
                        .input("n", n)
                        .input("l", l)
                        .input("m", m),
                );
            }
        }
    });
}

fn factorization_case(n: u32, l: i32, lambdas: &[Cx], tol: f64) -> Case {
    let name = format!("factorization/n={n}/l={l}");
    let setup = structure_constants(n, l).and_then(|rd| Ok((rd, gamma_pq(n, l, PTable::Corrected)?)));
    let (rd, parts) = match setup {
        Ok(x) => x,
        Err(e) => return Case::failed(name, e, tol),
    };
    let mut worst = (0.0f64, cx(0.0, 0.0));
    for &lam in lambdas {
        let direct = c_fn(lam, rd.m_plus).and_then(|c| Ok(1.0 / (c * c_fn(-lam, rd.m_plus)?)));
        let err = match (direct, parts.eval(lam)) {
            (Ok(d), Ok(g)) => (d - g).norm() / d.norm(),
            (Err(e), _) | (_, Err(e)) => return Case::failed(name, format!("lambda={}: {e}", fmt_cx(lam)), tol),
        };
        if !(err <= worst.0) {
            worst = (err, lam);
        }
    }
    Case::compare_real::<Error>(name, Ok(worst.0), Ok(tol), Check::AtMost, tol)
        .from("max relative gap of 1/(c(λ)c(−λ)) and γ p(λ) q(λ)", "tolerance")
        .input("n", n)
        .input("l", l)
        .input("samples", lambdas.len())
        .note(format!("worst at lambda={}", fmt_cx(worst.1)))
}

/// True when the printed p-table entry gives a different function.
fn printed_differs(n: u32, l: i32) -> bool {
    let (Ok(p), Ok(c)) = (gamma_pq(n, l, PTable::Printed), gamma_pq(n, l, PTable::Corrected)) else { return true };
    let lam = cx(0.37, 1.21);
    match (p.eval(lam), c.eval(lam)) {
        (Ok(x), Ok(y)) => (x - y).norm() > 1e-9 * y.norm(),
        _ => true,
    }
}

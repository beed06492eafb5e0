//! Suite drivers. Each maps configured grids onto the checks of
//! `rmt_core` and records one [`Case`] per comparison; numerical failures
//! are recorded, never propagated.

mod bounds;
mod c_calculus;
mod classical;
mod counterexample;
mod sl2;
mod su1n;

use crate::config::{ConfigError, Resolved, Suite, SuiteConfig};
use crate::report::{Case, Summary, SuiteReport, VerificationReport};
use rmt_core::Cx;

/// Runs every suite selected by `config`. Only configuration errors abort.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport, ConfigError> {
    let resolved = config.resolve()?;
    let mut report = VerificationReport::default();
    for r in resolved.iter().filter(|r| r.any_enabled()) {
        let mut out = SuiteReport::new(r.suite.name(), r.seed);
        let summary = &mut report.summary;
        match r.suite {
            Suite::Classical => classical::run(r, &mut out),
            Suite::Sl2 => sl2::run(r, &mut out, summary),
            Suite::Su1n => su1n::run(r, &mut out, summary),
            Suite::CCalculus => c_calculus::run(r, &mut out, summary),
            Suite::Bounds => bounds::run(r, &mut out),
            Suite::Counterexample => counterexample::run(r, &mut out),
            Suite::All => unreachable!("expanded by resolve"),
        }
        report.suites.push(out);
    }
    report.tally();
    Ok(report)
}

/// Runs a case group when enabled.
pub(crate) fn group(r: &Resolved, name: &str, out: &mut SuiteReport, f: impl FnOnce(&mut SuiteReport)) {
    if r.enabled(name) {
        f(out);
    }
}

pub(crate) fn fmt_cx(z: Cx) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

pub(crate) fn push_note(summary: &mut Summary, note: String) {
    summary.resolved.push(note);
}

/// Failing placeholders for every name when a shared computation fails.
pub(crate) fn all_failed(names: impl IntoIterator<Item = String>, why: &str, tol: f64) -> Vec<Case> {
    names.into_iter().map(|n| Case::failed(n, why, tol)).collect()
}

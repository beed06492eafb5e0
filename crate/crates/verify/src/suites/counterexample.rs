//! Borderline data of growth A = π/2: the spectral series vanishes while
//! truncations of the contour integral grow without bound.

use super::group;
use crate::config::Resolved;
use crate::report::{Case, Check, Curve, SuiteReport};
use rmt_core::master_sl2::counterexample_probe;
use rmt_core::master_su1n::counterexample_probe_chi;
use rmt_core::sl2::Sl2Kernel;
use rmt_core::su1n::ChiParam;
use rmt_core::Error;

pub const DIVERGENT: &str = "DIVERGENT-AS-EXPECTED";
pub const NOT_DIVERGENT: &str = "NOT-DIVERGENT";

const SERIES_TOL: f64 = 1e-12;
const MIN_GROWTH: f64 = 10.0;

/// Series maximum, truncations, growth factor and divergence flag.
type Probe = (f64, Vec<(f64, f64)>, f64, bool);

pub(crate) fn run(r: &Resolved, out: &mut SuiteReport) {
    let ts = [0.0, 0.2, 0.4, 0.6, 0.8];
    let heights = [10.0, 15.0, 20.0, 25.0, 30.0];
    let mut divergent = true;
    let mut probe = |out: &mut SuiteReport, label: String, result: Result<Probe, Error>| {
        match result {
            Ok((series_max, truncated, growth, flag)) => {
                divergent &= flag;
                out.cases.push(
                    Case::compare_real::<Error>(format!("{label}/series"), Ok(series_max), Ok(0.0), Check::Abs, SERIES_TOL)
                        .from("max |spectral series| over the t-grid", "0"),
                );
                out.cases.push(
                    Case::compare_real::<Error>(format!("{label}/growth"), Ok(growth), Ok(MIN_GROWTH), Check::AtLeast, 0.0)
                        .from("|∫_{−30i}^{30i}| / |∫_{−10i}^{10i}| at t = 0", "10"),
                );
                out.curves.push(
                    Curve::new(format!("{label}/truncations"), "height", truncated.iter().map(|p| p.0).collect())
                        .column("abs_integral", truncated.iter().map(|p| p.1).collect()),
                );
            }
            Err(e) => {
                divergent = false;
                out.cases.push(Case::failed(label, e, 0.0));
            }
        }
    };
    group(r, "sl2", out, |out| {
        let kernel = Sl2Kernel::validated(4).unwrap_or(Sl2Kernel::KIntegral);
        for n in [2i64, 1] {
            let res = counterexample_probe(n, &ts, &heights, kernel)
                .map(|c| (c.series_max, c.truncated, c.growth, c.divergent_as_expected));
            probe(out, format!("sl2/n={n}"), res);
        }
    });
    group(r, "su1n", out, |out| {
        let res = ChiParam::new(3, 2)
            .and_then(|p| counterexample_probe_chi(p, &ts[..3], &heights))
            .map(|c| (c.series_max, c.truncated, c.growth, c.divergent_as_expected));
        probe(out, "su1n/n=3/l=2".into(), res);
    });
    out.status = Some(if divergent { DIVERGENT } else { NOT_DIVERGENT }.into());
}

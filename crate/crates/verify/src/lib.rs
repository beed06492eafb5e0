//! Verification driver for the master theorems: configuration, suite
//! execution and machine-readable reports.
//!
//! ```
//! use rmt_verify::{run_suite, SuiteConfig, Suite};
//! let mut cfg = SuiteConfig::new(Suite::CCalculus);
//! cfg.global.cases = Some(vec!["normalization".into()]);
//! let report = run_suite(&cfg).unwrap();
//! assert!(report.all_pass());
//! ```

pub mod config;
pub mod report;
pub mod suites;

pub use config::{ConfigError, ConfigFile, Params, Suite, SuiteConfig};
pub use report::{Case, Check, Format, VerificationReport};
pub use suites::run_suite;

/// Exit codes of the `verify` binary.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAILURES: i32 = 1;
    pub const CONFIG: i32 = 2;
}

/// Caps the worker pool from `RMT_THREADS` (a positive integer).
pub fn apply_thread_cap(value: Option<&str>) -> Result<(), ConfigError> {
    let Some(v) = value else { return Ok(()) };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            rmt_core::par::set_threads(n);
            Ok(())
        }
        _ => Err(ConfigError::new("RMT_THREADS", format!("`{v}` is not a positive integer"))),
    }
}

use clap::Parser;
use rmt_verify::config::parse_list;
use rmt_verify::{apply_thread_cap, exit, run_suite, ConfigError, ConfigFile, Format, Params, Suite, SuiteConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Run a verification suite and emit a report.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Cli {
    /// classical | sl2 | su1n | c-calculus | bounds | counterexample | all
    suite: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    l: Option<i32>,
    /// Hardy-class data, NAME[:k=v,...]
    #[arg(long)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random spectral samples for the c-calculus suite
    #[arg(long)]
    samples: Option<usize>,
    /// Comma-separated case groups to run (empty runs none)
    #[arg(long)]
    cases: Option<String>,
    /// `key = value` file with optional [suite] sections
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
}

fn config_error(e: &ConfigError) -> ExitCode {
    eprintln!("verify: {e}");
    ExitCode::from(exit::CONFIG as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(exit::CONFIG as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(exit::PASS as u8);
        }
    };
    if let Err(e) = apply_thread_cap(std::env::var("RMT_THREADS").ok().as_deref()) {
        return config_error(&e);
    }
    let format: Format = match cli.format.parse() {
        Ok(f) => f,
        Err(msg) => return config_error(&ConfigError::new("format", msg)),
    };
    let file = match &cli.config {
        None => ConfigFile::default(),
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match ConfigFile::parse(&text) {
                Ok(f) => f,
                Err(e) => return config_error(&e),
            },
            Err(e) => return config_error(&ConfigError::new("config", format!("{}: {e}", path.display()))),
        },
    };
    let suite = match cli.suite.as_deref().map(str::parse::<Suite>).transpose() {
        Ok(s) => s,
        Err(e) => return config_error(&e),
    };
    let params = Params {
        n: cli.n,
        l: cli.l,
        a: cli.a,
        eta: cli.eta,
        tol: cli.tol,
        seed: cli.seed,
        samples: cli.samples,
        cases: cli.cases.as_deref().map(parse_list),
    };
    let config = SuiteConfig::from_file(file, params, suite);
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => return config_error(&e),
    };
    let mut body = report.emit(format);
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                return config_error(&ConfigError::new("out", format!("{}: {e}", path.display())));
            }
        }
        None => print!("{body}"),
    }
    let s = &report.summary;
    eprintln!("verify: {} passed, {} failed, {} expected failures", s.pass, s.fail, s.expected_failures);
    for suite in &report.suites {
        if let Some(status) = &suite.status {
            eprintln!("verify: {}: {status}", suite.suite);
        }
    }
    ExitCode::from(if report.all_pass() { exit::PASS } else { exit::FAILURES } as u8)
}

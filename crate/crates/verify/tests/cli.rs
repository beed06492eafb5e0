use rmt_verify::VerificationReport;
use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn empty_selection_prints_the_empty_report() {
    let o = verify(&["c-calculus", "--cases", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"suites":[],"summary":{"pass":0,"fail":0}}"#);
}

#[test]
fn passing_suite_exits_zero_and_round_trips() {
    let o = verify(&["c-calculus", "--cases", "normalization,dimension"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let report = VerificationReport::from_json(&text).unwrap();
    assert!(report.summary.pass > 0);
    assert_eq!(report.summary.fail, 0);
    assert_eq!(report.to_json(), text.trim());
}

#[test]
fn failing_case_exits_one() {
    // a tolerance below rounding level cannot hold for the normalization
    let o = verify(&["c-calculus", "--cases", "factorization", "--n", "5", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let report = VerificationReport::from_json(&stdout(&o)).unwrap();
    assert!(report.summary.fail > 0);
}

#[test]
fn config_errors_exit_two_with_a_field_path() {
    let o = verify(&["su1n", "--n", "3", "--l", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("su1n.l"), "{}", String::from_utf8_lossy(&o.stderr));

    let o = verify(&["sl2", "--a", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));

    let o = Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(["c-calculus", "--cases", "dimension"])
        .env("RMT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("RMT_THREADS"));
}

#[test]
fn config_file_sections_apply() {
    let dir = std::env::temp_dir().join(format!("rmt-verify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.conf");
    std::fs::write(&path, "# dimension only\nsuite = c-calculus\n\n[c-calculus]\nn = 2\ncases = dimension\n").unwrap();
    let o = verify(&["--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = VerificationReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.case_count(), 15);

    std::fs::write(&path, "[c-calculus]\nbogus = 1\n").unwrap();
    let o = verify(&["c-calculus", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn seeded_output_is_deterministic_across_thread_counts() {
    let args = ["c-calculus", "--cases", "factorization", "--n", "3", "--seed", "7", "--format", "csv"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_verify")).args(args).env("RMT_THREADS", threads).output().unwrap()
    };
    let (one, two) = (run("1"), run("2"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
    let text = stdout(&one);
    assert!(text.starts_with("suite,case,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,tol,pass"));
    let other = verify(&["c-calculus", "--cases", "factorization", "--n", "3", "--seed", "8", "--format", "csv"]);
    assert_ne!(stdout(&other), text);
}

#[test]
fn plotdata_and_out_file() {
    let dir = std::env::temp_dir().join(format!("rmt-verify-plot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curves.dat");
    let o = verify(&["counterexample", "--format", "plotdata", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# counterexample/sl2/n=2/truncations"));
    assert_eq!(lines.next(), Some("# height abs_integral"));
    let block: Vec<&str> = lines.take_while(|l| !l.is_empty()).collect();
    assert_eq!(block.len(), 5);
    assert!(block.iter().all(|l| l.split_whitespace().count() == 2));
    std::fs::remove_dir_all(&dir).ok();
}

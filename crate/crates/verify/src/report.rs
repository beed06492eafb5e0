//! Verification reports and their JSON, CSV and plot-data encodings.

use rmt_core::Cx;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

/// f64 that keeps NaN and ±∞ through JSON by writing them as strings.
mod float {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("NaN")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "NaN" => Ok(f64::NAN),
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                _ => Err(de::Error::custom(format!("not a number: {t}"))),
            },
        }
    }

    pub mod vec {
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        #[derive(Serialize, Deserialize)]
        struct W(#[serde(with = "super")] f64);

        pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(xs.iter().map(|&x| W(x)))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
            Ok(Vec::<W>::deserialize(d)?.into_iter().map(|w| w.0).collect())
        }
    }

    pub mod map {
        use serde::{Deserialize, Deserializer, Serialize, Serializer};
        use std::collections::BTreeMap;

        #[derive(Serialize, Deserialize)]
        struct W(#[serde(with = "super")] f64);

        pub fn serialize<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
            s.collect_map(m.iter().map(|(k, &v)| (k, W(v))))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, f64>, D::Error> {
            Ok(BTreeMap::<String, W>::deserialize(d)?.into_iter().map(|(k, w)| (k, w.0)).collect())
        }
    }
}

/// How a case compares its two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// |lhs − rhs| ≤ tol.
    Abs,
    /// |lhs − rhs| ≤ tol·|rhs|.
    Rel,
    /// Re lhs ≤ Re rhs (a certified constant against its bound).
    AtMost,
    /// Re lhs ≥ Re rhs.
    AtLeast,
    /// lhs = rhs bit for bit.
    Exact,
}

/// One comparison of two independently computed quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    /// Operation that produced each side.
    pub lhs_from: String,
    pub rhs_from: String,
    #[serde(with = "float")]
    pub lhs_re: f64,
    #[serde(with = "float")]
    pub lhs_im: f64,
    #[serde(with = "float")]
    pub rhs_re: f64,
    #[serde(with = "float")]
    pub rhs_im: f64,
    #[serde(with = "float")]
    pub abs_err: f64,
    #[serde(with = "float")]
    pub rel_err: f64,
    #[serde(with = "float")]
    pub tol: f64,
    pub check: Check,
    pub pass: bool,
    /// Failing is the documented outcome (e.g. a tabulated constant that
    /// does not hold); such cases do not fail the run.
    #[serde(default, skip_serializing_if = "is_false")]
    pub expected_failure: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty", with = "float::map")]
    pub constants: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl Case {
    /// Compares `lhs` against `rhs`; an error on either side fails the case
    /// and is kept in the note.
    pub fn compare<E: std::fmt::Display>(
        name: impl Into<String>,
        lhs: Result<Cx, E>,
        rhs: Result<Cx, E>,
        check: Check,
        tol: f64,
    ) -> Case {
        let nan = Cx::new(f64::NAN, f64::NAN);
        let mut notes = Vec::new();
        let l = lhs.unwrap_or_else(|e| {
            notes.push(format!("lhs: {e}"));
            nan
        });
        let r = rhs.unwrap_or_else(|e| {
            notes.push(format!("rhs: {e}"));
            nan
        });
        let abs_err = match check {
            Check::AtMost => (l.re - r.re).max(0.0),
            Check::AtLeast => (r.re - l.re).max(0.0),
            _ => (l - r).norm(),
        };
        let scale = r.norm();
        let rel_err = if scale > 0.0 {
            abs_err / scale
        } else if abs_err == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let pass = notes.is_empty()
            && match check {
                Check::Abs => abs_err <= tol,
                Check::Rel => abs_err <= tol * scale,
                Check::AtMost => l.re <= r.re,
                Check::AtLeast => l.re >= r.re,
                Check::Exact => l == r,
            };
        Case {
            name: name.into(),
            inputs: BTreeMap::new(),
            lhs_from: String::new(),
            rhs_from: String::new(),
            lhs_re: l.re,
            lhs_im: l.im,
            rhs_re: r.re,
            rhs_im: r.im,
            abs_err,
            rel_err,
            tol,
            check,
            pass,
            expected_failure: false,
            constants: BTreeMap::new(),
            note: (!notes.is_empty()).then(|| notes.join("; ")),
        }
    }

    /// Real-valued comparison.
    pub fn compare_real<E: std::fmt::Display>(
        name: impl Into<String>,
        lhs: Result<f64, E>,
        rhs: Result<f64, E>,
        check: Check,
        tol: f64,
    ) -> Case {
        let c = |x: f64| Cx::new(x, 0.0);
        Case::compare(name, lhs.map(c), rhs.map(c), check, tol)
    }

    /// A case whose inputs could not be produced at all.
    pub fn failed(name: impl Into<String>, why: impl std::fmt::Display, tol: f64) -> Case {
        Case::compare::<String>(name, Err(why.to_string()), Err("not evaluated".into()), Check::Abs, tol)
    }

    pub fn from(mut self, lhs: &str, rhs: &str) -> Self {
        self.lhs_from = lhs.into();
        self.rhs_from = rhs.into();
        self
    }

    pub fn input(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn constant(mut self, key: &str, value: f64) -> Self {
        self.constants.insert(key.into(), value);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(old) => format!("{old}; {note}"),
            None => note,
        });
        self
    }

    pub fn expected_failure(mut self) -> Self {
        self.expected_failure = true;
        self
    }

    pub fn lhs(&self) -> Cx {
        Cx::new(self.lhs_re, self.lhs_im)
    }

    pub fn rhs(&self) -> Cx {
        Cx::new(self.rhs_re, self.rhs_im)
    }

    /// Counts against the run.
    pub fn is_failure(&self) -> bool {
        !self.pass && !self.expected_failure
    }
}

/// Columns sampled over a common abscissa for external plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    pub x_label: String,
    #[serde(with = "float::vec")]
    pub x: Vec<f64>,
    pub columns: Vec<Column>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub label: String,
    #[serde(with = "float::vec")]
    pub values: Vec<f64>,
}

impl Curve {
    pub fn new(name: impl Into<String>, x_label: &str, x: Vec<f64>) -> Self {
        Curve { name: name.into(), x_label: x_label.into(), x, columns: Vec::new() }
    }

    /// Adds a column; it must match the abscissa length.
    pub fn column(mut self, label: &str, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.x.len(), "curve {}: column {label} misaligned", self.name);
        self.columns.push(Column { label: label.into(), values });
        self
    }
}

/// Version of the crate and, when available at build time, the commit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildInfo {
    pub version: String,
    pub git: String,
    pub parallel: bool,
}

impl BuildInfo {
    pub fn current() -> Self {
        BuildInfo {
            version: env!("CARGO_PKG_VERSION").into(),
            git: option_env!("RMT_GIT_DESCRIBE").unwrap_or("unknown").into(),
            parallel: cfg!(feature = "parallel"),
        }
    }
}

/// Cases of one suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub build: BuildInfo,
    pub seed: u64,
    pub cases: Vec<Case>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<Curve>,
    /// Overall verdict beyond pass/fail, e.g. `DIVERGENT-AS-EXPECTED`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64) -> Self {
        SuiteReport {
            suite: suite.into(),
            build: BuildInfo::current(),
            seed,
            cases: Vec::new(),
            curves: Vec::new(),
            status: None,
            notes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub expected_failures: usize,
    /// Calibrated normalizations of the inversion formulas.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty", with = "float::map")]
    pub kappa: BTreeMap<String, f64>,
    /// How ambiguous conventions were resolved.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub resolved: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suites: Vec<SuiteReport>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Plotdata,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "plotdata" => Ok(Format::Plotdata),
            _ => Err(format!("unsupported format `{s}` (json|csv|plotdata)")),
        }
    }
}

impl VerificationReport {
    /// Recomputes the pass/fail counts from the cases.
    pub fn tally(&mut self) {
        let cases = self.suites.iter().flat_map(|s| &s.cases);
        let (mut pass, mut fail, mut expected) = (0, 0, 0);
        for c in cases {
            match (c.pass, c.expected_failure) {
                (true, _) => pass += 1,
                (false, true) => expected += 1,
                (false, false) => fail += 1,
            }
        }
        self.summary.pass = pass;
        self.summary.fail = fail;
        self.summary.expected_failures = expected;
    }

    pub fn all_pass(&self) -> bool {
        self.suites.iter().flat_map(|s| &s.cases).all(|c| !c.is_failure())
    }

    pub fn case_count(&self) -> usize {
        self.suites.iter().map(|s| s.cases.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = ["suite", "case", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err", "tol", "pass"];
        w.write_record(header).expect("in-memory write");
        for s in &self.suites {
            for c in &s.cases {
                let num = |x: f64| format!("{x:e}");
                w.write_record([
                    s.suite.clone(),
                    c.name.clone(),
                    num(c.lhs_re),
                    num(c.lhs_im),
                    num(c.rhs_re),
                    num(c.rhs_im),
                    num(c.abs_err),
                    num(c.rel_err),
                    num(c.tol),
                    c.pass.to_string(),
                ])
                .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Whitespace-separated blocks, one per curve, separated by two blank
    /// lines (gnuplot `index` layout). Each block starts with `# suite/curve`
    /// and a header line of column labels.
    pub fn to_plotdata(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            for c in &s.curves {
                if !out.is_empty() {
                    out.push_str("\n\n");
                }
                let _ = writeln!(out, "# {}/{}", s.suite, c.name);
                let labels: Vec<&str> =
                    std::iter::once(c.x_label.as_str()).chain(c.columns.iter().map(|col| col.label.as_str())).collect();
                let _ = writeln!(out, "# {}", labels.join(" "));
                for (i, x) in c.x.iter().enumerate() {
                    let mut row = vec![format!("{x:>24.16e}")];
                    row.extend(c.columns.iter().map(|col| format!("{:>24.16e}", col.values[i])));
                    let _ = writeln!(out, "{}", row.join(" "));
                }
            }
        }
        out
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Plotdata => self.to_plotdata(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> VerificationReport {
        let mut s = SuiteReport::new("sl2", 7);
        s.cases.push(
            Case::compare::<String>("t=0.2", Ok(Cx::new(1.0, 0.5)), Ok(Cx::new(1.0, 0.5 + 1e-9)), Check::Rel, 1e-6)
                .from("series", "contour")
                .input("t", 0.2)
                .constant("kappa", std::f64::consts::TAU),
        );
        s.cases.push(Case::failed("broken", "pole at 2", 1e-6));
        s.curves.push(Curve::new("series-vs-contour", "t", vec![0.0, 0.5]).column("a", vec![1.0, 2.0]).column("b", vec![1.5, f64::NAN]));
        s.status = Some("OK".into());
        let mut r = VerificationReport { suites: vec![s], summary: Summary::default() };
        r.summary.kappa.insert("sl2".into(), std::f64::consts::TAU);
        r.tally();
        r
    }

    #[test]
    fn empty_report_json() {
        assert_eq!(VerificationReport::default().to_json(), r#"{"suites":[],"summary":{"pass":0,"fail":0}}"#);
        assert!(VerificationReport::default().all_pass());
    }

    #[test]
    fn json_round_trip_with_non_finite() {
        let r = sample();
        let back = VerificationReport::from_json(&r.to_json()).unwrap();
        // NaN ≠ NaN, so compare the encodings
        assert_eq!(back.to_json(), r.to_json());
        assert!(back.suites[0].cases[1].lhs_re.is_nan());
        assert_eq!((r.summary.pass, r.summary.fail), (1, 1));
    }

    #[test]
    fn csv_rows() {
        let r = sample();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), r.case_count() + 1);
        assert_eq!(lines[0], "suite,case,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,tol,pass");
        assert!(lines[1].starts_with("sl2,t=0.2,1e0,5e-1,"));
        assert!(lines[1].ends_with(",true"));
        assert!(VerificationReport::default().to_csv().lines().count() == 1);
    }

    #[test]
    fn plotdata_columns_aligned() {
        let p = sample().to_plotdata();
        let lines: Vec<&str> = p.lines().collect();
        assert_eq!(lines[0], "# sl2/series-vs-contour");
        assert_eq!(lines[1], "# t a b");
        let rows: Vec<Vec<&str>> = lines[2..].iter().map(|l| l.split_whitespace().collect()).collect();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.len() == 3));
        assert_eq!(lines[2].len(), lines[3].len());
    }

    #[test]
    fn checks() {
        let ok = |c: Case| c.pass;
        assert!(ok(Case::compare_real::<String>("x", Ok(3.0), Ok(10.0), Check::AtMost, 0.0)));
        assert!(!ok(Case::compare_real::<String>("x", Ok(11.0), Ok(10.0), Check::AtMost, 0.0)));
        assert!(ok(Case::compare_real::<String>("x", Ok(30.0), Ok(10.0), Check::AtLeast, 0.0)));
        assert!(ok(Case::compare_real::<String>("x", Ok(4.0), Ok(4.0), Check::Exact, 0.0)));
        assert!(!ok(Case::compare_real::<String>("x", Ok(4.0), Ok(4.0 + 1e-15), Check::Exact, 1.0)));
        let c = Case::compare_real::<String>("x", Ok(1e-13), Ok(0.0), Check::Abs, 1e-12);
        assert!(c.pass && c.rel_err.is_infinite());
        let c = Case::compare::<String>("x", Ok(Cx::new(1.0, 0.0)), Err("boom".into()), Check::Abs, 1.0);
        assert!(!c.pass && c.note.as_deref() == Some("rhs: boom"));
    }

    #[test]
    fn expected_failures_do_not_count() {
        let mut s = SuiteReport::new("x", 0);
        s.cases.push(Case::compare_real::<String>("x", Ok(1.0), Ok(2.0), Check::Abs, 0.1).expected_failure());
        let mut r = VerificationReport { suites: vec![s], summary: Summary::default() };
        r.tally();
        assert!(r.all_pass());
        assert_eq!((r.summary.pass, r.summary.fail, r.summary.expected_failures), (0, 0, 1));
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![-1e300f64..1e300, -1.0f64..1.0, Just(0.0), Just(f64::MIN_POSITIVE), Just(-0.0)]
    }

    proptest! {
        #[test]
        fn round_trip_any_numbers(vals in proptest::collection::vec((finite(), finite(), finite(), finite()), 0..6),
                                  name in "[a-z=,.0-9 ]{0,12}", tol in 1e-15f64..1.0) {
            let mut s = SuiteReport::new("p", 3);
            for (i, (a, b, c, d)) in vals.iter().enumerate() {
                s.cases.push(
                    Case::compare::<String>(format!("{name}{i}"), Ok(Cx::new(*a, *b)), Ok(Cx::new(*c, *d)), Check::Rel, tol)
                        .input("i", i),
                );
            }
            let mut r = VerificationReport { suites: vec![s], summary: Summary::default() };
            r.tally();
            let back = VerificationReport::from_json(&r.to_json()).unwrap();
            prop_assert_eq!(back, r.clone());
            prop_assert_eq!(r.to_csv().lines().count(), r.case_count() + 1);
        }
    }
}

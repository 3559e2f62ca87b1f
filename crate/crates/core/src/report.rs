//! Machine-readable reports of a suite run.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::IdentityCheck;

/// Checks in run order with pass counts. Carries no timestamp, so equal
/// runs produce equal bytes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<IdentityCheck>,
}

impl Report {
    pub fn new(checks: Vec<IdentityCheck>) -> Self {
        let passed = checks.iter().filter(|c| c.passed).count();
        Self { total: checks.len(), passed, failed: checks.len() - passed, checks }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Report = serde_json::from_str(text).map_err(|e| Error::Config(format!("report: {e}")))?;
        let passed = report.checks.iter().filter(|c| c.passed).count();
        if report.total != report.checks.len() || report.passed != passed || report.failed != report.total - passed {
            return Err(Error::Config("report counts disagree with its checks".into()));
        }
        Ok(report)
    }

    /// One row per check. Reals carry 17 significant digits and non-finite
    /// values are left empty; `params` is a JSON object.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(format!("writing csv: {e}"));
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_HEADER).map_err(io)?;
        for c in &self.checks {
            let params = serde_json::to_string(&c.params).expect("params serialize");
            let reals = [c.lhs_re, c.lhs_im, c.rhs_re, c.rhs_im, c.abs_err, c.rel_err, c.tolerance_used].map(real);
            let mut row = vec![c.name.clone(), params];
            row.extend(reals);
            row.extend([
                c.passed.to_string(),
                c.converged.to_string(),
                c.lhs_evals.to_string(),
                c.rhs_evals.to_string(),
                c.error.clone().unwrap_or_default(),
            ]);
            out.write_record(&row).map_err(io)?;
        }
        out.flush().map_err(|e| Error::Io(format!("writing csv: {e}")))?;
        Ok(())
    }
}

const CSV_HEADER: [&str; 14] = [
    "name",
    "params",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_err",
    "rel_err",
    "tolerance_used",
    "passed",
    "converged",
    "lhs_evals",
    "rhs_evals",
    "error",
];

fn real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::identities::{params, Param};
    use crate::quadrature::QuadSummary;
    use crate::Complex64;

    fn sample() -> Report {
        let q = QuadSummary { err_estimate: 1e-12, evals: 45, converged: true };
        let a = IdentityCheck::new(
            "fractional_mellin",
            params([("s_re", 0.25.into()), ("s_im", 3.0.into())]),
            (Complex64::new(-0.123_456_789_012_345_68, 1.0 / 3.0), q),
            (Complex64::new(-0.1234567890123457, 1.0 / 3.0 + 1e-15), q),
            1e-8,
        );
        let b = IdentityCheck::failed(
            "mellin_convolution",
            params([("f", Param::from("gaussian")), ("g", "indicator".into()), ("s_re", 0.5.into())]),
            f64::NAN,
            &Error::NonConvergence("budget".into()),
        );
        Report::new(vec![a, b])
    }

    fn same(a: &IdentityCheck, b: &IdentityCheck) -> bool {
        let bits = |c: &IdentityCheck| {
            [c.lhs_re, c.lhs_im, c.rhs_re, c.rhs_im, c.abs_err, c.rel_err, c.tolerance_used].map(|v| {
                if v.is_nan() {
                    u64::MAX
                } else {
                    v.to_bits()
                }
            })
        };
        a.name == b.name
            && a.params == b.params
            && bits(a) == bits(b)
            && a.passed == b.passed
            && a.converged == b.converged
            && a.lhs_evals == b.lhs_evals
            && a.rhs_evals == b.rhs_evals
            && a.error == b.error
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!((r.total, r.passed, r.failed), (2, 1, 1));
        let text = r.to_json();
        let back = Report::from_json(&text).unwrap();
        assert!(r.checks.iter().zip(&back.checks).all(|(a, b)| same(a, b)));
        assert_eq!(back.to_json(), text);
        assert!(!text.contains("NaN"));
    }

    #[test]
    fn inconsistent_counts_rejected() {
        let text = sample().to_json().replace("\"passed\": 1", "\"passed\": 2");
        assert!(Report::from_json(&text).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut rows = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = rows.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(header, CSV_HEADER);
        let recs: Vec<csv::StringRecord> = rows.records().map(|r| r.unwrap()).collect();
        assert_eq!(recs.len(), 2);
        let lhs: f64 = recs[0][2].parse().unwrap();
        assert_eq!(lhs, sample().checks[0].lhs_re);
        assert_eq!(&recs[0][3], "3.3333333333333331e-1");
        assert_eq!(&recs[1][2], "");
        let p: serde_json::Value = serde_json::from_str(&recs[1][1]).unwrap();
        assert_eq!(p["f"], "gaussian");
    }
}

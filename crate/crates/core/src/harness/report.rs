//! Structured verification reports.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::point::Point;
use crate::splitting::{Algorithm, IterationTrace};

pub const SCHEMA_VERSION: u32 = 1;

/// Raw outcome of one measurement, before a tolerance is applied.
#[derive(Clone, Debug)]
pub struct Measured {
    pub expected: String,
    pub actual: String,
    pub residual: f64,
}

impl Measured {
    pub fn scalar(expected: f64, actual: f64, residual: f64) -> Self {
        Measured {
            expected: format_f64(expected),
            actual: format_f64(actual),
            residual,
        }
    }

    /// Number of failing cases; expected is zero.
    pub fn count(failures: usize) -> Self {
        Measured {
            expected: "0 failures".into(),
            actual: format!("{failures} failures"),
            residual: failures as f64,
        }
    }

    pub fn points(expected: &Point, actual: &Point) -> Self {
        Measured {
            expected: expected.to_string(),
            actual: actual.to_string(),
            residual: expected.distance(actual),
        }
    }
}

/// How a check's residual is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Normal,
    /// The property is expected to fail; the residual is 0 when a failure
    /// was witnessed.
    ExpectedFailure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    #[serde(with = "nonfinite")]
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub mode: CheckMode,
    pub reference: String,
}

impl Check {
    /// `pass ⟺ residual ≤ tolerance`; a NaN residual fails.
    pub fn new(name: &str, m: Measured, tolerance: f64, mode: CheckMode, reference: &str) -> Self {
        Check {
            name: name.into(),
            pass: m.residual <= tolerance,
            expected: m.expected,
            actual: m.actual,
            residual: m.residual,
            tolerance,
            mode,
            reference: reference.into(),
        }
    }

    /// Check whose measurement raised an error.
    pub fn errored(name: &str, err: &crate::Error, reference: &str) -> Self {
        Check {
            name: name.into(),
            expected: "no error".into(),
            actual: err.to_string(),
            residual: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
            mode: CheckMode::Normal,
            reference: reference.into(),
        }
    }
}

/// Condensed view of an iteration trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub algorithm: Algorithm,
    pub converged: bool,
    pub iterations_used: usize,
    pub x0: Point,
    pub anchor: Option<Point>,
    pub final_iterate: Point,
    pub final_shadow: Point,
    #[serde(with = "nonfinite")]
    pub final_residual: f64,
}

impl TraceSummary {
    pub fn of(trace: &IterationTrace) -> Self {
        TraceSummary {
            algorithm: trace.algorithm,
            converged: trace.converged,
            iterations_used: trace.iterations_used,
            x0: trace.iterates[0].clone(),
            anchor: trace.anchor.clone(),
            final_iterate: trace.last().clone(),
            final_shadow: trace.last_shadow().clone(),
            final_residual: trace.last_residual(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub fixture: String,
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traces: Option<Vec<TraceSummary>>,
    pub passed: bool,
}

impl Report {
    /// Sorts the checks by name and derives the overall verdict.
    pub fn new(fixture: &str, suite: &str, seed: u64, samples: usize, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = checks.iter().all(|c| c.pass);
        Report {
            schema_version: SCHEMA_VERSION,
            fixture: fixture.into(),
            suite: suite.into(),
            seed,
            samples,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            checks,
            traces: None,
            passed,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Equality ignoring the timestamp.
    pub fn same_outcome(&self, other: &Report) -> bool {
        let mut a = self.clone();
        a.timestamp = other.timestamp;
        a == *other
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One line per check followed by a verdict line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match (c.pass, c.mode) {
                (true, CheckMode::ExpectedFailure) => "PASS (expected failure)",
                (true, CheckMode::Normal) => "PASS",
                (false, _) => "FAIL",
            };
            out.push_str(&format!(
                "{tag:<24} {:<48} residual={} tol={}\n",
                c.name,
                format_f64(c.residual),
                format_f64(c.tolerance)
            ));
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{} / {}: {} checks, {} failed\n",
            self.fixture,
            self.suite,
            self.checks.len(),
            failed
        ));
        out
    }
}

/// Locale-independent shortest round-trip formatting.
pub fn format_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e6) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// JSON has no infinities; non-finite values are written as strings.
mod nonfinite {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&super::format_f64(*v))
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
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(serde::de::Error::custom(format!("bad number `{t}`"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_are_sorted_and_verdict_follows_residuals() {
        let c = |n: &str, r: f64| Check::new(n, Measured::scalar(0.0, r, r), 1e-3, CheckMode::Normal, "ref");
        let rep = Report::new("fx", "suite", 1, 10, vec![c("b", 0.0), c("a", 1.0)]);
        assert_eq!(rep.checks[0].name, "a");
        assert!(!rep.passed);
        assert_eq!(rep.failures().count(), 1);
        let nan = c("nan", f64::NAN);
        assert!(!nan.pass);
    }

    #[test]
    fn json_round_trip() {
        let rep = Report::new(
            "fx",
            "suite",
            7,
            3,
            vec![Check::new("x", Measured::count(0), 0.0, CheckMode::Normal, "r")],
        );
        let back: Report = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
        assert!(rep.to_json().contains("\"schema_version\": 1"));
        let err = crate::Error::Oracle("x".into());
        let rep = Report::new("fx", "s", 0, 0, vec![Check::errored("e", &err, "r")]);
        let back: Report = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(back.checks[0].residual, f64::INFINITY);
    }

    #[test]
    fn float_format() {
        assert_eq!(format_f64(0.0), "0");
        assert_eq!(format_f64(1.5), "1.5");
        assert_eq!(format_f64(1e-12), "1e-12");
        assert_eq!(format_f64(f64::INFINITY), "inf");
    }
}

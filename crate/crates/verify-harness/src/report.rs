//! Per-check records, the run summary and the two output formats.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{Format, RunConfig};

pub const VERSION: &str = concat!("verify-harness ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InconclusiveKind {
    /// The model or ball lies outside the statement's hypotheses; expected.
    OutOfDomain,
    /// The run was refused by the memory estimate.
    Budget,
    /// The check itself errored; never expected.
    Error,
}

/// Where the expected value of a check comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Asserted verbatim by the statement being checked.
    Stated,
    /// Computed by an independent oracle (solver, brute force).
    Derived,
    /// A property of the implementation rather than of the mathematics.
    Infrastructure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub p: u32,
    pub e: u32,
    pub f: u32,
    pub q: u32,
    pub prec: u32,
    pub ball: u32,
}

impl Params {
    pub fn of(config: &RunConfig) -> Self {
        Params { p: config.p, e: config.e, f: config.f, q: config.q(), prec: config.prec, ball: config.ball }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub params: Params,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inconclusive: Option<InconclusiveKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub provenance: Provenance,
    pub anchor: String,
    pub witness: Value,
    pub ms: u64,
}

impl CheckRecord {
    /// Failures and erroring checks; out-of-domain checks are expected.
    pub fn is_unexpected(&self) -> bool {
        self.status == Status::Fail || self.inconclusive == Some(InconclusiveKind::Error)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub unexpected: usize,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

impl Report {
    /// Sorts the records by id and fills in the summary.
    pub fn assemble(config: RunConfig, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
        let unexpected = checks.iter().filter(|c| c.is_unexpected()).count();
        let budget = checks.iter().any(|c| c.inconclusive == Some(InconclusiveKind::Budget));
        let exit_code = if unexpected > 0 {
            EXIT_FAIL
        } else if budget {
            EXIT_BUDGET
        } else {
            EXIT_OK
        };
        let summary = Summary {
            total: checks.len(),
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            inconclusive: count(Status::Inconclusive),
            unexpected,
            exit_code,
        };
        Report { version: VERSION.to_string(), config, checks, summary }
    }

    pub fn record(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// The report with every timing field zeroed, for stability comparisons.
    pub fn without_timing(&self) -> Report {
        let mut out = self.clone();
        for check in &mut out.checks {
            check.ms = 0;
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "{}  p={} e={} f={} q={} prec={} ball={} seed={}",
            self.version,
            c.p,
            c.e,
            c.f,
            c.q(),
            c.prec,
            c.ball,
            c.seed
        );
        let _ = writeln!(out, "{:<44} {:<13} {:<14} {:>8}  note", "check", "status", "provenance", "ms");
        for check in &self.checks {
            let status = match (check.status, check.inconclusive) {
                (Status::Pass, _) => "pass",
                (Status::Fail, _) => "FAIL",
                (Status::Inconclusive, Some(InconclusiveKind::OutOfDomain)) => "n/a (domain)",
                (Status::Inconclusive, Some(InconclusiveKind::Budget)) => "n/a (budget)",
                (Status::Inconclusive, _) => "ERROR",
            };
            let provenance = match check.provenance {
                Provenance::Stated => "stated",
                Provenance::Derived => "derived",
                Provenance::Infrastructure => "infrastructure",
            };
            let note = check.reason.as_deref().unwrap_or("");
            let _ = writeln!(out, "{:<44} {:<13} {:<14} {:>8}  {}", check.id, status, provenance, check.ms, note);
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "total {}  pass {}  fail {}  inconclusive {}  unexpected {}  exit {}",
            s.total, s.pass, s.fail, s.inconclusive, s.unexpected, s.exit_code
        );
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str, status: Status, inconclusive: Option<InconclusiveKind>) -> CheckRecord {
        let config = RunConfig::new(2, 1, 2).unwrap();
        CheckRecord {
            id: id.into(),
            params: Params::of(&config),
            status,
            inconclusive,
            reason: None,
            provenance: Provenance::Stated,
            anchor: String::new(),
            witness: Value::Null,
            ms: 7,
        }
    }

    #[test]
    fn exit_codes_follow_the_worst_record() {
        let config = RunConfig::new(2, 1, 2).unwrap();
        let with = |records| Report::assemble(config.clone(), records).summary.exit_code;
        assert_eq!(with(vec![]), EXIT_OK);
        assert_eq!(with(vec![record("a", Status::Inconclusive, Some(InconclusiveKind::OutOfDomain))]), EXIT_OK);
        assert_eq!(with(vec![record("a", Status::Inconclusive, Some(InconclusiveKind::Budget))]), EXIT_BUDGET);
        assert_eq!(with(vec![record("a", Status::Inconclusive, Some(InconclusiveKind::Error))]), EXIT_FAIL);
        assert_eq!(
            with(vec![record("b", Status::Fail, None), record("a", Status::Inconclusive, Some(InconclusiveKind::Budget))]),
            EXIT_FAIL
        );
    }

    #[test]
    fn records_are_sorted_and_timing_can_be_dropped() {
        let config = RunConfig::new(2, 1, 2).unwrap();
        let report = Report::assemble(config, vec![record("b", Status::Pass, None), record("a", Status::Pass, None)]);
        assert_eq!(report.checks[0].id, "a");
        assert!(report.without_timing().checks.iter().all(|c| c.ms == 0));
        assert!(report.to_text().contains("pass"));
    }
}

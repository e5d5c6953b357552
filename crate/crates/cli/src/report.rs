//! CSV run reports.

use std::fmt;
use std::io::Write;
use std::time::Duration;

use latesched_core::time::{display, to_decimal};
use latesched_core::Rational;

use crate::Scenario;

pub const HEADER: [&str; 10] = [
    "instance",
    "scenario",
    "epsilon",
    "status",
    "algorithm_lmax",
    "oracle_lmax",
    "ratio",
    "ratio_decimal",
    "guesses",
    "wall_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Infeasible,
    /// Instance larger than the oracle cap.
    Skipped,
    /// Ratio above `1 + eps`, or a guarantee the oracle refutes.
    Violation,
    BudgetExceeded,
    Invalid,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Infeasible => "infeasible",
            Status::Skipped => "skipped",
            Status::Violation => "violation",
            Status::BudgetExceeded => "budget_exceeded",
            Status::Invalid => "invalid",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub instance: String,
    pub scenario: Scenario,
    pub epsilon: Rational,
    pub status: Status,
    pub algorithm_lmax: Option<Rational>,
    pub oracle_lmax: Option<Rational>,
    pub guesses: Option<u64>,
    pub wall: Option<Duration>,
}

impl ReportRow {
    pub fn new(
        instance: impl Into<String>,
        scenario: Scenario,
        epsilon: Rational,
        status: Status,
    ) -> Self {
        ReportRow {
            instance: instance.into(),
            scenario,
            epsilon,
            status,
            algorithm_lmax: None,
            oracle_lmax: None,
            guesses: None,
            wall: None,
        }
    }

    /// `algorithm / oracle`, present when both are.
    pub fn ratio(&self) -> Option<Rational> {
        match (self.algorithm_lmax, self.oracle_lmax) {
            (Some(a), Some(o)) if o != Rational::from_integer(0) => Some(a / o),
            _ => None,
        }
    }

    fn record(&self) -> [String; 10] {
        let opt = |v: Option<Rational>| v.map(display).unwrap_or_default();
        let ratio = self.ratio();
        [
            self.instance.clone(),
            self.scenario.to_string(),
            display(self.epsilon),
            self.status.to_string(),
            opt(self.algorithm_lmax),
            opt(self.oracle_lmax),
            opt(ratio),
            ratio.map(|r| to_decimal(r, 6)).unwrap_or_default(),
            self.guesses.map(|g| g.to_string()).unwrap_or_default(),
            self.wall
                .map(|w| format!("{:.3}", w.as_secs_f64() * 1000.0))
                .unwrap_or_default(),
        ]
    }
}

/// Writes a header row followed by `rows`.
pub fn write_csv<W: Write>(out: W, rows: &[ReportRow]) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(HEADER)?;
    for row in rows {
        writer.write_record(row.record())?;
    }
    writer.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[ReportRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

use std::collections::BTreeMap;
use std::io::Write;

use jacobi_core::multiplication::Discrepancy;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Failures kept verbatim in a report; the rest are only counted.
pub const MAX_STORED_FAILURES: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub location: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Per-check totals. Residuals are stored divided by `scale`, so every
/// check is compared against the same suite tolerance; `tolerance` here is
/// the effective one in the check's own units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub count: u64,
    pub scale: f64,
    pub tolerance: f64,
    pub max_residual: f64,
    pub failures: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: String,
    pub parameters: BTreeMap<String, Value>,
    pub tolerance: f64,
    pub max_residual: f64,
    pub passed: bool,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    pub checks: Vec<CheckSummary>,
    pub measurements: BTreeMap<String, Value>,
    pub discrepancies: Vec<Discrepancy>,
    pub seed: u64,
    pub runtime_ms: u64,
}

/// Output of `verify --suite all`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub schema_version: u32,
    pub passed: bool,
    pub reports: Vec<VerificationReport>,
}

/// Accumulates check results for one suite.
#[derive(Debug)]
pub struct Recorder {
    tolerance: f64,
    checks: Vec<CheckSummary>,
    failures: Vec<Failure>,
    failure_count: u64,
    max_residual: f64,
    measurements: BTreeMap<String, Value>,
    discrepancies: Vec<Discrepancy>,
}

impl Recorder {
    pub fn new(tolerance: f64) -> Self {
        Recorder {
            tolerance,
            checks: Vec::new(),
            failures: Vec::new(),
            failure_count: 0,
            max_residual: 0.0,
            measurements: BTreeMap::new(),
            discrepancies: Vec::new(),
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Starts a check whose raw residuals are compared against
    /// `scale * tolerance`.
    pub fn begin(&mut self, name: &str, scale: f64) {
        self.checks.push(CheckSummary {
            name: name.to_string(),
            count: 0,
            scale,
            tolerance: scale * self.tolerance,
            max_residual: 0.0,
            failures: 0,
        });
    }

    /// Records one comparison. Non-finite residuals count as failures.
    pub fn record(&mut self, location: impl FnOnce() -> String, lhs: f64, rhs: f64, raw: f64) {
        let check = self.checks.last_mut().expect("record called before begin");
        let residual = if raw.is_finite() {
            raw / check.scale
        } else {
            f64::MAX
        };
        check.count += 1;
        check.max_residual = check.max_residual.max(residual);
        self.max_residual = self.max_residual.max(residual);
        if residual > self.tolerance {
            check.failures += 1;
            self.failure_count += 1;
            if self.failures.len() < MAX_STORED_FAILURES {
                self.failures.push(Failure {
                    check: check.name.clone(),
                    location: location(),
                    lhs: finite_or_max(lhs),
                    rhs: finite_or_max(rhs),
                    residual,
                });
            }
        }
    }

    /// Shorthand for `|lhs - rhs|` residuals.
    pub fn compare(&mut self, location: impl FnOnce() -> String, lhs: f64, rhs: f64) {
        self.record(location, lhs, rhs, (lhs - rhs).abs());
    }

    /// Records a boolean condition as residual 0 or infinity.
    pub fn require(&mut self, location: impl FnOnce() -> String, ok: bool) {
        let r = if ok { 0.0 } else { f64::INFINITY };
        self.record(location, f64::from(u8::from(ok)), 1.0, r);
    }

    pub fn measure(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("measurement serializes");
        self.measurements.insert(key.to_string(), v);
    }

    pub fn add_discrepancies(&mut self, d: impl IntoIterator<Item = Discrepancy>) {
        self.discrepancies.extend(d);
    }

    /// Largest residual of the named check, in its own units.
    pub fn check_max(&self, name: &str) -> Option<f64> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.max_residual * c.scale)
    }

    pub fn checks(&self) -> &[CheckSummary] {
        &self.checks
    }

    pub fn failure_count(&self) -> u64 {
        self.failure_count
    }

    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn finish(
        self,
        suite: &str,
        parameters: BTreeMap<String, Value>,
        seed: u64,
        runtime_ms: u64,
    ) -> VerificationReport {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            parameters,
            tolerance: self.tolerance,
            max_residual: self.max_residual,
            passed: self.failure_count == 0,
            failure_count: self.failure_count,
            failures: self.failures,
            checks: self.checks,
            measurements: self.measurements,
            discrepancies: self.discrepancies,
            seed,
            runtime_ms,
        }
    }
}

fn finite_or_max(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        f64::MAX.copysign(v)
    }
}

/// Writes reports as CSV: a table of checks, then failures and
/// discrepancies when there are any, separated by blank lines.
pub fn write_csv<W: Write>(reports: &[VerificationReport], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    w.write_record([
        "suite",
        "check",
        "count",
        "tolerance",
        "max_residual",
        "failures",
    ])?;
    for r in reports {
        for c in &r.checks {
            w.write_record([
                r.suite.clone(),
                c.name.clone(),
                c.count.to_string(),
                c.tolerance.to_string(),
                (c.max_residual * c.scale).to_string(),
                c.failures.to_string(),
            ])?;
        }
    }
    if reports.iter().any(|r| !r.failures.is_empty()) {
        w.write_record([""])?;
        w.write_record(["suite", "check", "location", "lhs", "rhs", "residual"])?;
        for r in reports {
            for f in &r.failures {
                w.write_record([
                    r.suite.clone(),
                    f.check.clone(),
                    f.location.clone(),
                    f.lhs.to_string(),
                    f.rhs.to_string(),
                    f.residual.to_string(),
                ])?;
            }
        }
    }
    if reports.iter().any(|r| !r.discrepancies.is_empty()) {
        w.write_record([""])?;
        w.write_record([
            "suite",
            "j2",
            "m2",
            "q2",
            "quantity",
            "printed",
            "corrected",
        ])?;
        for r in reports {
            for d in &r.discrepancies {
                w.write_record([
                    r.suite.clone(),
                    d.triple.j2().to_string(),
                    d.triple.m2().to_string(),
                    d.triple.q2().to_string(),
                    d.quantity.clone(),
                    d.printed.to_string(),
                    d.corrected.to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

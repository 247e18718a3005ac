use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A failure the scenario was built to produce, confirmed.
    ExpectedFail,
    /// Not assessed because the data violate the clause's hypotheses.
    Flagged,
    /// Reported without a threshold.
    Info,
}

impl Status {
    pub fn from_check(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub experiment: String,
    pub level: String,
    pub norm: String,
    pub value: f64,
    pub reference: Option<f64>,
    pub tolerance: Option<f64>,
    pub status: Status,
}

/// Plot-ready numeric table written as `<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub experiment: String,
    pub rows: Vec<ReportRow>,
    pub tables: Vec<Table>,
    pub summary: Map<String, Value>,
}

impl Report {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self { experiment: experiment.into(), rows: Vec::new(), tables: Vec::new(), summary: Map::new() }
    }

    /// Appends a row; `reference` and `tolerance` are optional context.
    pub fn row(
        &mut self,
        level: impl Into<String>,
        norm: impl Into<String>,
        value: f64,
        reference: Option<f64>,
        tolerance: Option<f64>,
        status: Status,
    ) {
        self.rows.push(ReportRow {
            experiment: self.experiment.clone(),
            level: level.into(),
            norm: norm.into(),
            value,
            reference,
            tolerance,
            status,
        });
    }

    pub fn info(&mut self, level: impl Into<String>, norm: impl Into<String>, value: f64) {
        self.row(level, norm, value, None, None, Status::Info);
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.rows.extend(other.rows);
        self.tables.extend(other.tables);
        self.summary.extend(other.summary);
    }

    fn summary_json(&self) -> Value {
        let count = |s: Status| self.rows.iter().filter(|r| r.status == s).count();
        json!({
            "experiment": self.experiment,
            "passed": self.passed(),
            "counts": {
                "pass": count(Status::Pass),
                "fail": count(Status::Fail),
                "expected_fail": count(Status::ExpectedFail),
                "flagged": count(Status::Flagged),
                "info": count(Status::Info),
            },
            "details": self.summary,
            "tables": self.tables.iter().map(|t| format!("{}.csv", t.name)).collect::<Vec<_>>(),
        })
    }

    /// Writes `<experiment>_report.csv`, `<experiment>_summary.json` and
    /// every table into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let rows_path = dir.join(format!("{}_report.csv", self.experiment));
        let mut w = csv::Writer::from_path(&rows_path)?;
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        written.push(rows_path);
        for t in &self.tables {
            let path = dir.join(format!("{}.csv", t.name));
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(&t.header)?;
            for row in &t.rows {
                w.write_record(row.iter().map(|v| v.to_string()))?;
            }
            w.flush()?;
            written.push(path);
        }
        let summary_path = dir.join(format!("{}_summary.json", self.experiment));
        fs::write(&summary_path, serde_json::to_string_pretty(&self.summary_json())? + "\n")?;
        written.push(summary_path);
        Ok(written)
    }
}

/// Relative change `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn drift(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Observed order `log(e_coarse / e_fine) / log(h_coarse / h_fine)`.
pub fn observed_order(e_coarse: f64, e_fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (e_coarse / e_fine).ln() / (h_coarse / h_fine).ln()
}

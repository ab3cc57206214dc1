//! Check reports and CSV plot rows.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn and(self, other: Status) -> Status {
        Status::from_bool(self == Status::Pass && other == Status::Pass)
    }
}

/// The reproducible part of a report. Two runs with the same inputs and seed
/// serialize this to the same bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportBody {
    pub check_name: String,
    pub tool_version: String,
    pub seed: u64,
    /// SHA-256 of each input file, keyed by the flag that supplied it.
    pub input_digests: BTreeMap<String, String>,
    pub parameters: BTreeMap<String, Value>,
    /// Non-finite numbers appear as `null`.
    pub results: Value,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub body: ReportBody,
    pub wall_time_ms: u64,
}

impl CheckReport {
    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn body_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(&self.body)?)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Converts any serializable value to JSON, mapping NaN and infinities to null.
pub fn to_value<T: Serialize>(value: &T) -> Result<Value, CliError> {
    Ok(serde_json::to_value(value)?)
}

/// One plotting row: a statistic at a parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub check: String,
    pub param1: Option<f64>,
    pub param2: Option<f64>,
    pub value: Option<f64>,
    pub witness: String,
}

impl CsvRow {
    pub fn new(check: &str, param1: Option<f64>, param2: Option<f64>, value: f64, witness: impl Into<String>) -> Self {
        CsvRow {
            check: check.to_string(),
            param1,
            param2,
            value: value.is_finite().then_some(value),
            witness: witness.into(),
        }
    }
}

pub fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| CliError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    if rows.is_empty() {
        writer.write_record(["check", "param1", "param2", "value", "witness"])?;
    }
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| CliError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(())
}

pub fn write_json(path: &Path, report: &CheckReport) -> Result<(), CliError> {
    let mut text = report.to_json()?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

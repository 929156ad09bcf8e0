use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::suite::{SuiteConfig, SuiteName};
use crate::error::{Result, SpinorError};

/// Value of the `format` field in report files.
pub const REPORT_FORMAT: &str = "spinorlab-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// Identifies one executed check within a suite.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    /// What is being checked, e.g. `"psi1"` or `"random"`.
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: SuiteName,
    pub params: Params,
    pub status: Status,
    /// Non-finite values serialize as `null`.
    pub metrics: BTreeMap<String, f64>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

impl Summary {
    pub fn from_records(records: &[CheckRecord]) -> Self {
        records.iter().fold(Summary::default(), |mut s, r| {
            s.total += 1;
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Error => s.errors += 1,
            }
            s
        })
    }
}

/// Wall-clock data. Kept apart so that reports compare byte-for-byte without it.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timing {
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub format: String,
    pub config: SuiteConfig,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    pub timing: Timing,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.errors == 0
    }

    /// Exit code: 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    /// Checks that the summary matches the records and that no check appears twice.
    pub fn audit(&self) -> Result<()> {
        if self.summary != Summary::from_records(&self.records) {
            return Err(SpinorError::InternalVerification(
                "report summary disagrees with its records".into(),
            ));
        }
        let mut seen = HashSet::new();
        for r in &self.records {
            if !seen.insert((r.suite, &r.params)) {
                return Err(SpinorError::InternalVerification(format!(
                    "duplicate record {:?} {:?}",
                    r.suite, r.params
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        self.audit()?;
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| SpinorError::InternalVerification(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }

    /// The report without its `timing` field, for run-to-run comparison.
    pub fn comparison_json(&self) -> Result<String> {
        let mut value = serde_json::to_value(self)
            .map_err(|e| SpinorError::InternalVerification(e.to_string()))?;
        if let Some(obj) = value.as_object_mut() {
            obj.remove("timing");
        }
        serde_json::to_string_pretty(&value)
            .map_err(|e| SpinorError::InternalVerification(e.to_string()))
    }

    pub fn write(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

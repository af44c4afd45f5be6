//! Run summaries and file emission.
//!
//! Every scenario produces a `RunSummary`: the effective parameters (echoed,
//! so nothing is hidden), one `CheckResult` per asserted quantity, and the
//! list of artifacts written. The summary serializes to a versioned JSON
//! document; curve data goes to CSV and to two-column plotdata files, one
//! file per curve. All numeric formatting is fixed so re-runs are
//! byte-identical.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// How `measured` relates to `expected` for the check to pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|measured - expected| <= tolerance`
    AbsDiff,
    /// `measured <= expected + tolerance`
    UpperBound,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl CheckResult {
    pub fn abs_diff(name: &str, measured: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            expected,
            tolerance,
            comparison: Comparison::AbsDiff,
            pass: (measured - expected).abs() <= tolerance,
        }
    }

    pub fn upper_bound(name: &str, measured: f64, limit: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            expected: limit,
            tolerance,
            comparison: Comparison::UpperBound,
            pass: measured <= limit + tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub kind: String,
    /// Effective parameters, including every default that applied.
    pub params: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<CheckResult>,
    pub artifacts: Vec<String>,
    pub all_pass: bool,
}

impl RunSummary {
    pub fn new(kind: &str, params: BTreeMap<String, serde_json::Value>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind: kind.into(),
            params,
            checks: Vec::new(),
            artifacts: Vec::new(),
            all_pass: true,
        }
    }

    pub fn push_check(&mut self, check: CheckResult) {
        self.all_pass &= check.pass;
        self.checks.push(check);
    }

    pub fn record_artifact(&mut self, name: &str) {
        self.artifacts.push(name.into());
    }

    pub fn write(&self, out_dir: &Path) -> Result<PathBuf> {
        let path = out_dir.join("summary.json");
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, text + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn print_checks(&self) {
        for c in &self.checks {
            let rel = match c.comparison {
                Comparison::AbsDiff => "vs",
                Comparison::UpperBound => "<=",
            };
            println!(
                "[{}] {}: measured {:.9e} {} expected {:.9e} (tol {:.1e})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                rel,
                c.expected,
                c.tolerance,
            );
        }
    }
}

/// Write a multi-column CSV with a header row.
pub fn write_csv(out_dir: &Path, name: &str, header: &str, rows: &[Vec<f64>]) -> Result<String> {
    let path = out_dir.join(name);
    let mut file =
        std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    writeln!(file, "{header}")?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
        writeln!(file, "{}", cells.join(","))?;
    }
    Ok(name.to_string())
}

/// Two-column whitespace-delimited plotdata, one curve per file.
pub fn write_plotdata(out_dir: &Path, name: &str, points: &[(f64, f64)]) -> Result<String> {
    let path = out_dir.join(name);
    let mut file =
        std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    for (x, y) in points {
        writeln!(file, "{x:.12e} {y:.12e}")?;
    }
    Ok(name.to_string())
}

/// Insert a JSON-serializable value into a parameter echo map.
pub fn echo<T: Serialize>(map: &mut BTreeMap<String, serde_json::Value>, key: &str, value: &T) {
    map.insert(
        key.into(),
        serde_json::to_value(value).expect("parameters are plain data"),
    );
}

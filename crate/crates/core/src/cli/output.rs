//! CSV tables and JSON run manifests.

use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Header plus rows of optional numbers; `None` is written as `null`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Rows with at least one `null`.
    pub fn null_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.iter().any(Option::is_none)).count()
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                match v {
                    Some(x) => write!(s, "{}", format_number(*x)).unwrap(),
                    None => s.push_str("null"),
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Parse a table written by [`Table::to_csv`].
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines();
        let header = lines.next().unwrap_or("");
        let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|f| match f.trim() {
                    "null" | "" => Ok(None),
                    v => v.parse::<f64>().map(Some).map_err(|_| {
                        crate::Error::Usage(format!("{}:{}: bad number `{v}`", path.display(), n + 2))
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(Table { columns, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.get(i).copied().flatten()).collect())
    }
}

/// Scientific notation with 15 significant digits.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.14e}")
    } else {
        "null".into()
    }
}

/// JSON sidecar describing one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub version: String,
    pub timestamp: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: BTreeMap<String, String>) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(format!("{}.manifest.json", self.command));
        std::fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(path)
    }
}

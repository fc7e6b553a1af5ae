//! Result records, their human-readable table and on-disk outputs.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qde_core::ExtReal;

use crate::error::{QdeError, Result};
use crate::spec::{OptimizerSpec, Task, Tolerances};

/// A scalar result. `+∞` is written as the string `"+inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Flag(bool),
    Text(String),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Number(x) => Some(*x),
            _ => None,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        if x.is_finite() {
            Value::Number(x)
        } else if x.is_nan() {
            Value::Text("nan".into())
        } else if x > 0.0 {
            Value::Text("+inf".into())
        } else {
            Value::Text("-inf".into())
        }
    }
}

impl From<ExtReal> for Value {
    fn from(x: ExtReal) -> Self {
        match x.finite() {
            Some(v) => Value::Number(v),
            None => Value::Text("+inf".into()),
        }
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Flag(b)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Number(n as f64)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => write!(f, "{x}"),
            Value::Flag(b) => write!(f, "{b}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

/// Rows of equal length under named columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

/// An inequality or identity check with its residual.
///
/// The check passes when `residual ≤ tolerance`; residuals are signed so that
/// the margin is visible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: Value,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual: residual.into(), tolerance, passed: residual <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerSpec>,
}

impl Provenance {
    pub fn new(seed: u64, tolerances: Tolerances) -> Self {
        Self { version: version(), seed, tolerances, optimizer: None }
    }
}

/// `qde <crate version>`, with the commit when built with `QDE_GIT_REV` set.
pub fn version() -> String {
    match option_env!("QDE_GIT_REV") {
        Some(rev) => format!("qde {}+{rev}", env!("CARGO_PKG_VERSION")),
        None => format!("qde {}", env!("CARGO_PKG_VERSION")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub task: Task,
    pub name: String,
    pub scalars: BTreeMap<String, Value>,
    pub series: BTreeMap<String, Series>,
    pub checks: Vec<Check>,
    pub provenance: Provenance,
    /// Seconds; the only field that varies between identical runs.
    pub wall_time_s: f64,
}

impl ResultRecord {
    pub fn new(task: Task, name: impl Into<String>, provenance: Provenance) -> Self {
        Self {
            task,
            name: name.into(),
            scalars: BTreeMap::new(),
            series: BTreeMap::new(),
            checks: Vec::new(),
            provenance,
            wall_time_s: 0.0,
        }
    }

    pub fn scalar(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.scalars.insert(key.into(), value.into());
    }

    pub fn check(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.checks.push(Check::new(name, residual, tolerance));
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        self.scalars.get(key).and_then(Value::as_f64)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Plain-text table. Every number printed here is read from the record.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ({}) ==", self.name, self.task.name());
        let width = self
            .scalars
            .keys()
            .chain(self.checks.iter().map(|c| &c.name))
            .map(String::len)
            .max()
            .unwrap_or(0);
        for (k, v) in &self.scalars {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        for (name, s) in &self.series {
            let _ = writeln!(out, "-- {name}");
            let _ = writeln!(out, "{}", s.columns.join("\t"));
            for r in &s.rows {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "{}", cells.join("\t"));
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "-- checks");
            for c in &self.checks {
                let mark = if c.passed { "ok" } else { "FAIL" };
                let residual = match &c.residual {
                    Value::Number(x) => format!("{x:e}"),
                    other => other.to_string(),
                };
                let _ = writeln!(out, "{:<width$}  {mark:<4}  residual {residual}  tolerance {:e}", c.name, c.tolerance);
            }
        }
        out
    }

    /// Write `<stem>.json` and one `<stem>.<series>.csv` per series into `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let mut written = Vec::new();
        let json = dir.join(format!("{stem}.json"));
        write_atomic(&json, self.to_json()?.as_bytes())?;
        written.push(json);
        for (name, s) in &self.series {
            let path = dir.join(format!("{stem}.{name}.csv"));
            write_atomic(&path, &series_csv(s)?)?;
            written.push(path);
        }
        Ok(written)
    }
}

fn series_csv(s: &Series) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&s.columns)?;
    for r in &s.rows {
        w.write_record(r.iter().map(|x| x.to_string()))?;
    }
    w.into_inner().map_err(|e| QdeError::Io { path: PathBuf::from("<csv buffer>"), source: e.into_error() })
}

fn io(path: &Path, source: std::io::Error) -> QdeError {
    QdeError::Io { path: path.to_path_buf(), source }
}

/// Write via a temporary file in the same directory, then rename over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| io(path, e))?;
    tmp.persist(path).map_err(|e| io(path, e.error))?;
    Ok(())
}

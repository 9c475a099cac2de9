use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Format;

/// Version of the JSON layout; bumped with any change to `schema/output.json`.
pub const SCHEMA_VERSION: &str = "1.0.0";

/// A numeric table with a header row.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push<I: IntoIterator<Item = Value>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }

    fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|v| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            }))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Result of a command: a bulk table (possibly empty) and a summary object.
pub struct Report {
    pub command: &'static str,
    pub spec: Value,
    pub seed: Option<u64>,
    pub table: Table,
    pub summary: Value,
}

impl Report {
    fn document(&self, with_rows: bool) -> Value {
        let mut results = self.summary.clone();
        if with_rows {
            results["columns"] = json!(self.table.header);
            results["rows"] = json!(self.table.rows);
        }
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "spec": self.spec,
            "seed": self.seed,
            "results": results,
        })
    }

    /// Writes the report. JSON puts everything into `out`; CSV writes the
    /// table to `out` and the summary to the sidecar [`sidecar_path`].
    /// Returns the paths written.
    pub fn write(&self, out: &Path, format: Format) -> Result<Vec<PathBuf>> {
        match format {
            Format::Json => {
                write_atomic(out, |w| write_json(w, &self.document(true)))?;
                Ok(vec![out.to_path_buf()])
            }
            Format::Csv => {
                let side = sidecar_path(out);
                write_atomic(out, |w| self.table.write_csv(w))?;
                write_atomic(&side, |w| write_json(w, &self.document(false)))?;
                Ok(vec![out.to_path_buf(), side])
            }
        }
    }
}

/// `run.csv` gets `run.json`; any other name gets `.json` appended.
pub fn sidecar_path(out: &Path) -> PathBuf {
    match out.extension() {
        Some(e) if e == "csv" => out.with_extension("json"),
        _ => {
            let mut s = out.as_os_str().to_owned();
            s.push(".json");
            PathBuf::from(s)
        }
    }
}

fn write_json<W: Write>(mut w: W, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    Ok(())
}

/// Writes into a temporary file beside `path`, then renames it into place.
fn write_atomic(path: &Path, fill: impl FnOnce(&mut std::io::BufWriter<&std::fs::File>) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// JSON number, or `null` when not finite.
pub fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

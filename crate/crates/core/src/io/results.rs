//! Result tables: one row per time step, CSV and JSON serialization.

use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "step,time_fs,mz_exact,mz_trotter,mz_noisy,mz_sampled_mean,mz_sampled_stderr";

/// One time-step record. The exact and Trotter columns are always present;
/// backend-dependent columns are None when not computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub step: usize,
    pub time_fs: f64,
    pub mz_exact: f64,
    pub mz_trotter: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mz_noisy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mz_sampled_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mz_sampled_stderr: Option<f64>,
}

/// Rows ordered by step, with time = step * dt.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

/// Output encodings for [`write_results`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultFormat {
    Csv,
    Json,
}

impl ResultFormat {
    /// Pick a format from a file extension; anything but .json means CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => ResultFormat::Json,
            _ => ResultFormat::Csv,
        }
    }
}

impl ResultTable {
    pub fn new(rows: Vec<ResultRow>) -> Self {
        Self { rows }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.step,
                r.time_fs,
                r.mz_exact,
                r.mz_trotter,
                opt(r.mz_noisy),
                opt(r.mz_sampled_mean),
                opt(r.mz_sampled_stderr),
            ));
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h == CSV_HEADER => {}
            Some(h) => {
                return Err(Error::ResultParse(format!("unexpected header '{h}'")));
            }
            None => return Err(Error::ResultParse("empty document".into())),
        }
        let mut rows = Vec::new();
        for (idx, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Error::ResultParse(format!(
                    "row {idx}: expected 7 fields, got {}",
                    fields.len()
                )));
            }
            let parse = |s: &str, name: &str| -> Result<f64> {
                s.parse::<f64>()
                    .map_err(|e| Error::ResultParse(format!("row {idx}, {name}: {e}")))
            };
            let parse_opt = |s: &str, name: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    parse(s, name).map(Some)
                }
            };
            rows.push(ResultRow {
                step: fields[0]
                    .parse()
                    .map_err(|e| Error::ResultParse(format!("row {idx}, step: {e}")))?,
                time_fs: parse(fields[1], "time_fs")?,
                mz_exact: parse(fields[2], "mz_exact")?,
                mz_trotter: parse(fields[3], "mz_trotter")?,
                mz_noisy: parse_opt(fields[4], "mz_noisy")?,
                mz_sampled_mean: parse_opt(fields[5], "mz_sampled_mean")?,
                mz_sampled_stderr: parse_opt(fields[6], "mz_sampled_stderr")?,
            });
        }
        Ok(Self { rows })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ResultParse(e.to_string()))
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Write the table to disk in the requested format.
pub fn write_results(table: &ResultTable, format: ResultFormat, path: &Path) -> Result<()> {
    let text = match format {
        ResultFormat::Csv => table.to_csv_string(),
        ResultFormat::Json => table.to_json_string(),
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))?;
    Ok(())
}

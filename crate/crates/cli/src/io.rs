//! File ingestion and output writing.
//!
//! Metric files: JSON (`{"n": …, "d": [[i, j, value], …]}`, 0-based,
//! `i < j`) is canonical; files ending in `.csv` are read as full
//! symmetric matrices and validated the same way. Norm specifications and
//! sample domains are JSON only.

use std::fs;
use std::io::Write;
use std::path::Path;

use normquot::metric::FiniteMetric;
use normquot::norms::{NormSpec, SampleDomain};

/// Read a metric from JSON, or from a full-matrix CSV when the extension
/// is `.csv`. Validation happens in both paths.
pub fn read_metric(path: &Path) -> Result<FiniteMetric, String> {
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let table = read_csv_matrix(path)?;
        FiniteMetric::from_matrix(&table).map_err(|e| format!("{}: {e}", path.display()))
    } else {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn read_csv_matrix(path: &Path) -> Result<Vec<Vec<f64>>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let mut table = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format!("{}: {e}", path.display()))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = record.iter().map(|f| f.parse::<f64>()).collect();
        table.push(parsed.map_err(|e| format!("{}: row {row}: {e}", path.display()))?);
    }
    Ok(table)
}

pub fn read_norm_spec(path: &Path) -> Result<NormSpec, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Read and re-validate a stored sample domain.
pub fn read_domain(path: &Path) -> Result<SampleDomain, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let domain: SampleDomain =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    domain
        .validate()
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(domain)
}

/// Pretty JSON plus trailing newline, to a file or standard output.
pub fn write_json<T: serde::Serialize>(value: &T, output: Option<&Path>) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    write_bytes(text.as_bytes(), output)
}

/// Rows of comma-separated values, one row per line.
pub fn write_csv_rows(rows: &[Vec<f64>], output: Option<&Path>) -> Result<(), String> {
    let mut text = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        text.push_str(&line.join(","));
        text.push('\n');
    }
    write_bytes(text.as_bytes(), output)
}

fn write_bytes(bytes: &[u8], output: Option<&Path>) -> Result<(), String> {
    match output {
        Some(path) => fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| e.to_string()),
    }
}

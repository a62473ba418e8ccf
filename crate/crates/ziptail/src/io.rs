//! File IO: sample readers, CSV emission, and JSON artifacts.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use ziptail_core::tail::SampleBatch;

use crate::{AppError, Result};

/// Reads one positive integer observation per line.
///
/// Blank lines and lines starting with `#` are skipped. Parse failures
/// report the offending 1-based line number.
pub fn read_integer_samples(path: &Path) -> Result<SampleBatch> {
    let file = File::open(path)
        .map_err(|e| AppError::runtime(format!("cannot open {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| {
            AppError::runtime(format!("read failed in {} at line {}: {e}", path.display(), idx + 1))
        })?;
        let token = line.trim();
        if token.is_empty() || token.starts_with('#') {
            continue;
        }
        let value: u64 = token.parse().map_err(|e| {
            AppError::runtime(format!(
                "bad observation {token:?} in {} at line {}: {e}",
                path.display(),
                idx + 1
            ))
        })?;
        values.push(value);
    }
    SampleBatch::new(values)
        .map_err(|e| AppError::runtime(format!("unusable sample in {}: {e}", path.display())))
}

/// Formats a float for a CSV cell; non-finite values become empty cells.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        String::new()
    }
}

/// Writes a header and rows to a CSV file, creating parent directories.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    ensure_parent(path)?;
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| AppError::runtime(format!("cannot create {}: {e}", path.display())))?;
    writer
        .write_record(header)
        .and_then(|()| rows.iter().try_for_each(|row| writer.write_record(row)))
        .map_err(|e| AppError::runtime(format!("cannot write {}: {e}", path.display())))?;
    writer
        .flush()
        .map_err(|e| AppError::runtime(format!("cannot flush {}: {e}", path.display())))
}

/// Serializes a value as pretty JSON, creating parent directories.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    ensure_parent(path)?;
    let body = serde_json::to_vec_pretty(value)
        .map_err(|e| AppError::runtime(format!("cannot serialize {}: {e}", path.display())))?;
    std::fs::write(path, body)
        .map_err(|e| AppError::runtime(format!("cannot write {}: {e}", path.display())))
}

/// Writes one value per line (integer observations or float states).
pub fn write_lines<T: std::fmt::Display>(path: &Path, values: &[T]) -> Result<()> {
    ensure_parent(path)?;
    let file = File::create(path)
        .map_err(|e| AppError::runtime(format!("cannot create {}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    values
        .iter()
        .try_for_each(|v| writeln!(out, "{v}"))
        .and_then(|()| out.flush())
        .map_err(|e| AppError::runtime(format!("cannot write {}: {e}", path.display())))
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| {
                AppError::runtime(format!("cannot create directory {}: {e}", parent.display()))
            })?;
        }
    }
    Ok(())
}

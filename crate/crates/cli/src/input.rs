use std::fs::File;
use std::path::Path;

use linkmax::dcov::DataMatrix;
use linkmax::SquareMatrix;

use crate::error::CliError;

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::input(format!("{}: cannot open: {e}", path.display())))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    let at = e
        .position()
        .map(|p| format!(" at line {}", p.line()))
        .unwrap_or_default();
    CliError::input(format!("{}{at}: {e}", path.display()))
}

fn parse_cell(path: &Path, line: u64, column: &str, raw: &str) -> Result<f64, CliError> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Err(CliError::input(format!(
            "{}: line {line}, column {column}: missing value",
            path.display()
        )));
    }
    let v: f64 = raw.parse().map_err(|_| {
        CliError::input(format!(
            "{}: line {line}, column {column}: '{raw}' is not a number",
            path.display()
        ))
    })?;
    if !v.is_finite() {
        return Err(CliError::input(format!(
            "{}: line {line}, column {column}: value '{raw}' is not finite",
            path.display()
        )));
    }
    Ok(v)
}

/// Reads a data CSV: one header row of feature labels, then one observation
/// per row. Missing and non-numeric cells are rejected.
pub fn read_data(path: &Path) -> Result<DataMatrix, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(open(path)?);
    let labels: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    if labels.is_empty() || labels.iter().all(String::is_empty) {
        return Err(CliError::input(format!("{}: missing header row", path.display())));
    }
    if let Some(j) = labels.iter().position(String::is_empty) {
        return Err(CliError::input(format!(
            "{}: line 1, column {}: empty feature label",
            path.display(),
            j + 1
        )));
    }
    let mut columns = vec![Vec::new(); labels.len()];
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        for (j, raw) in record.iter().enumerate() {
            columns[j].push(parse_cell(path, line, &labels[j], raw)?);
        }
    }
    DataMatrix::from_columns(labels, columns)
        .map_err(|e| CliError::from_library(&path.display().to_string(), e))
}

/// Reads a square, header-free weight CSV.
pub fn read_weights(path: &Path) -> Result<SquareMatrix, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(open(path)?);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .enumerate()
            .map(|(j, raw)| parse_cell(path, line, &(j + 1).to_string(), raw))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::input(format!("{}: no rows", path.display())));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != rows.len()) {
        return Err(CliError::input(format!(
            "{}: line {}: expected {} columns for a square matrix, found {}",
            path.display(),
            i + 1,
            rows.len(),
            r.len()
        )));
    }
    SquareMatrix::from_rows(&rows).map_err(|e| CliError::from_library(&path.display().to_string(), e))
}

//! CSV datasets, model files and plot data.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::dataset::Dataset;
use crate::lacki::{KiConfig, LackiState};

pub const MODEL_VERSION: &str = "lacki-model-v1";

/// On-disk model: `{"version": "lacki-model-v1", "config", "data", "ell"}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    version: String,
    config: KiConfig,
    data: Dataset,
    ell: f64,
}

pub fn write_model(path: &Path, state: &LackiState) -> Result<(), CliError> {
    let file = ModelFile {
        version: MODEL_VERSION.to_string(),
        config: state.config().clone(),
        data: state.data().clone(),
        ell: state.ell(),
    };
    write_json(path, &file)
}

pub fn read_model(path: &Path) -> Result<LackiState, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file: ModelFile =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if file.version != MODEL_VERSION {
        return Err(CliError::Usage(format!(
            "{}: unsupported model version {:?}",
            path.display(),
            file.version
        )));
    }
    Ok(LackiState::from_parts(file.config, file.data, file.ell)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Splits a header into the counts of `x_1..x_d` and `y_1..y_m` columns.
fn parse_header(path: &Path, header: &csv::StringRecord, outputs: bool) -> Result<(usize, usize), CliError> {
    let bad = |msg: String| CliError::Usage(format!("{}: header: {msg}", path.display()));
    let mut d = 0;
    let mut m = 0;
    for name in header.iter() {
        let name = name.trim();
        let expected_x = format!("x_{}", d + 1);
        let expected_y = format!("y_{}", m + 1);
        if m == 0 && name == expected_x {
            d += 1;
        } else if outputs && d > 0 && name == expected_y {
            m += 1;
        } else {
            let wanted = if outputs && d > 0 {
                format!("{expected_x} or {expected_y}")
            } else {
                expected_x
            };
            return Err(bad(format!("expected column {wanted}, found {name:?}")));
        }
    }
    if d == 0 {
        return Err(bad("no x_1 column".into()));
    }
    if outputs && m == 0 {
        return Err(bad("no y_1 column".into()));
    }
    Ok((d, m))
}

fn reader(path: &Path) -> Result<csv::Reader<File>, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(file))
}

/// Reads numeric rows of exactly `width` finite cells; row numbers in errors
/// count data rows from 1.
fn read_rows(path: &Path, rdr: &mut csv::Reader<File>, header: &csv::StringRecord) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| CliError::Usage(format!("{}: row {row}: {e}", path.display())))?;
        if rec.len() != header.len() {
            return Err(CliError::Usage(format!(
                "{}: row {row}: expected {} cells, found {}",
                path.display(),
                header.len(),
                rec.len()
            )));
        }
        let mut values = Vec::with_capacity(rec.len());
        for (col, cell) in rec.iter().enumerate() {
            let v: f64 = cell.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| {
                CliError::Usage(format!(
                    "{}: row {row}, column {} ({}): expected a finite number, found {cell:?}",
                    path.display(),
                    col + 1,
                    &header[col]
                ))
            })?;
            values.push(v);
        }
        rows.push(values);
    }
    Ok(rows)
}

/// Training data with header `x_1..x_d,y_1..y_m`.
pub fn read_dataset(path: &Path) -> Result<Dataset, CliError> {
    let mut rdr = reader(path)?;
    let header = rdr
        .headers()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        .clone();
    let (d, m) = parse_header(path, &header, true)?;
    let rows = read_rows(path, &mut rdr, &header)?;
    let mut data = Dataset::new(d, m)?;
    for r in rows {
        data.push(&r[..d], &r[d..])?;
    }
    Ok(data)
}

/// Query inputs with header `x_1..x_d`.
pub fn read_queries(path: &Path) -> Result<(usize, Vec<Vec<f64>>), CliError> {
    let mut rdr = reader(path)?;
    let header = rdr
        .headers()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        .clone();
    let (d, _) = parse_header(path, &header, false)?;
    Ok((d, read_rows(path, &mut rdr, &header)?))
}

/// CSV with the given header; floats use the shortest round-trip form.
pub fn write_csv<R, I>(path: &Path, header: &[String], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Whitespace-separated two-column plot data.
pub fn write_dat(path: &Path, points: impl IntoIterator<Item = (f64, f64)>) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    for (x, y) in points {
        writeln!(w, "{x} {y}").map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

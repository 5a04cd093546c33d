//! CSV ingestion and emission of ordinal data matrices. Blank, `NA` and `na`
//! fields are censored entries.

use std::path::Path;

use co3_core::model::OrdinalDataset;

use crate::config::IngestSettings;
use crate::error::{CliError, Result};

const MISSING: [&str; 3] = ["", "NA", "na"];

/// Parses CSV bytes into a dataset. Rows and columns in error messages are
/// 1-based positions in the data block (after any header).
pub fn parse_dataset(path: &Path, bytes: &[u8], settings: &IngestSettings) -> Result<OrdinalDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(settings.header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let ingest_err = |row: usize, col: usize, msg: String| CliError::Ingest { path: path.to_path_buf(), row, col, msg };

    let mut p = None;
    let mut codes: Vec<Option<u32>> = Vec::new();
    let mut n = 0;
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Input { path: path.to_path_buf(), msg: e.to_string() })?;
        n += 1;
        let width = *p.get_or_insert(record.len());
        if record.len() != width {
            return Err(ingest_err(n, record.len().min(width) + 1, format!("expected {width} fields, found {}", record.len())));
        }
        for (j, field) in record.iter().enumerate() {
            if MISSING.contains(&field) {
                codes.push(None);
                continue;
            }
            let v: i64 = field.parse().map_err(|_| ingest_err(n, j + 1, format!("{field:?} is not an integer code")))?;
            let code = if settings.binary01 {
                match v {
                    0 | 1 => v + 1,
                    _ => return Err(ingest_err(n, j + 1, format!("binary data must be 0 or 1, found {v}"))),
                }
            } else if v < 1 {
                return Err(ingest_err(n, j + 1, format!("codes start at 1, found {v}")));
            } else {
                v
            };
            let code = u32::try_from(code).map_err(|_| ingest_err(n, j + 1, format!("code {v} is too large")))?;
            codes.push(Some(code));
        }
    }
    let p = match p {
        Some(p) if n > 0 && p > 0 => p,
        _ => return Err(CliError::Input { path: path.to_path_buf(), msg: "no data rows".into() }),
    };
    let max_code = codes.iter().flatten().copied().max().unwrap_or(0);
    let c = match settings.categories {
        Some(c) => {
            if let Some(idx) = codes.iter().position(|v| v.is_some_and(|v| v > c)) {
                return Err(ingest_err(idx / p + 1, idx % p + 1, format!("code exceeds categories = {c}")));
            }
            c
        }
        None if settings.binary01 => 2,
        None => max_code.max(2),
    };
    let delta: Vec<bool> = codes.iter().map(Option::is_some).collect();
    let y: Vec<u32> = codes.iter().map(|v| v.unwrap_or(0)).collect();
    Ok(OrdinalDataset::new(n, p, c, y, delta)?)
}

pub fn read_dataset(path: &Path, settings: &IngestSettings) -> Result<(OrdinalDataset, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let data = parse_dataset(path, &bytes, settings)?;
    Ok((data, bytes))
}

/// Writes the normalised form: codes `1..=c`, censored entries blank, no header.
pub fn format_dataset(data: &OrdinalDataset) -> String {
    let mut out = String::with_capacity(data.n() * data.p() * 2);
    for i in 0..data.n() {
        for j in 0..data.p() {
            if j > 0 {
                out.push(',');
            }
            if data.observed(i, j) {
                out.push_str(&data.y(i, j).to_string());
            }
        }
        out.push('\n');
    }
    out
}

//! CSV ingestion.

use std::path::Path;

use anyhow::{bail, Context, Result};
use tailsel_core::data::{binarize_target, BinaryDataset, Frame, RawDataset};

/// Target columns tried, in order, when none is named.
pub const DEFAULT_TARGETS: [&str; 2] = ["Diabetes_binary", "Diabetes_012"];

/// Reads a numeric CSV with a header row. Every column except the target is
/// a feature. Missing or non-numeric cells are errors naming the row (1-based,
/// header excluded) and column.
pub fn load_csv(path: &Path, target: Option<&str>) -> Result<RawDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let headers: Vec<String> = reader
        .headers()
        .with_context(|| format!("cannot read the header of {}", path.display()))?
        .iter()
        .map(str::to_owned)
        .collect();
    let target_idx = match target {
        Some(name) => headers
            .iter()
            .position(|h| h == name)
            .with_context(|| format!("target column {name:?} not found in {}", path.display()))?,
        None => DEFAULT_TARGETS
            .iter()
            .find_map(|t| headers.iter().position(|h| h == t))
            .with_context(|| {
                format!("no target column in {} (looked for {})", path.display(), DEFAULT_TARGETS.join(", "))
            })?,
    };
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); headers.len()];
    for (row, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("malformed CSV at data row {}", row + 1))?;
        if record.len() != headers.len() {
            bail!("data row {} has {} fields, header has {}", row + 1, record.len(), headers.len());
        }
        for (j, field) in record.iter().enumerate() {
            if field.is_empty() {
                bail!("missing value at data row {}, column {:?}", row + 1, headers[j]);
            }
            let v: f64 = field
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .with_context(|| format!("non-numeric value {field:?} at data row {}, column {:?}", row + 1, headers[j]))?;
            columns[j].push(v);
        }
    }
    let target_raw = columns.remove(target_idx);
    let mut names = headers;
    let target_name = names.remove(target_idx);
    if target_raw.is_empty() {
        bail!("{} has no data rows", path.display());
    }
    if target_raw.iter().all(|&v| v == target_raw[0]) {
        bail!("target column {target_name:?} is constant");
    }
    let features = Frame::new(names, columns)?;
    Ok(RawDataset::new(features, target_raw)?)
}

/// `load_csv` followed by target binarization.
pub fn load_binary(path: &Path, target: Option<&str>) -> Result<BinaryDataset> {
    let raw = load_csv(path, target)?;
    Ok(binarize_target(raw)?)
}

/// Writes a dataset as CSV with the target as the first column.
pub fn write_csv(path: &Path, data: &BinaryDataset, target_name: &str) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    let mut header = vec![target_name.to_owned()];
    header.extend(data.features.names().iter().cloned());
    w.write_record(&header)?;
    for i in 0..data.n_rows() {
        let mut rec = vec![data.target[i].to_string()];
        rec.extend(data.features.row(i).iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

//! Wide CSV and JSON dataset formats.
//!
//! CSV: a header row `group,t_0,...,t_{m-1}` carrying the grid points, then
//! one row per curve holding its one-based group label and its `m` values.
//! JSON mirrors the same shape: `{"grid": [...], "rows": [{"group", "values"}]}`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Curve, FunctionalDataset, Grid};
use crate::error::{Error, Result};

/// Reads a wide CSV dataset from `path`.
pub fn load_csv(path: impl AsRef<Path>) -> Result<FunctionalDataset> {
    read_csv(File::open(path)?)
}

pub fn read_csv(reader: impl Read) -> Result<FunctionalDataset> {
    let (grid, labels, curves) = read_wide(reader)?;
    FunctionalDataset::new(grid, curves, labels)
}

/// Reads derivative curves stored in the same wide CSV layout and checks
/// them against `ds` (same labels, same grid).
pub fn load_derivatives_csv(path: impl AsRef<Path>, ds: FunctionalDataset) -> Result<FunctionalDataset> {
    let (grid, labels, curves) = read_wide(File::open(path)?)?;
    if grid != *ds.grid() {
        return Err(Error::input("derivative file grid differs from the dataset grid"));
    }
    if labels != ds.labels() {
        return Err(Error::input("derivative file group labels differ from the dataset"));
    }
    ds.with_derivatives(curves)
}

fn read_wide(reader: impl Read) -> Result<(Grid, Vec<usize>, Vec<Curve>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = records
        .next()
        .ok_or_else(|| Error::input("empty file: expected a header row"))??;
    if header.len() < 2 {
        return Err(Error::input_at(1, None, "header needs a group column and grid points"));
    }
    let points = header
        .iter()
        .enumerate()
        .skip(1)
        .map(|(c, cell)| {
            cell.parse::<f64>().map_err(|_| {
                Error::input_at(1, Some(c + 1), format!("grid point '{cell}' is not a number"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = Grid::from_points(points).map_err(|e| match e {
        Error::Input { message, .. } => Error::input_at(1, None, message),
        other => other,
    })?;
    let width = header.len();

    let mut labels = Vec::new();
    let mut curves = Vec::new();
    for (k, rec) in records.enumerate() {
        let row = k + 2;
        let rec = rec?;
        if rec.len() != width {
            return Err(Error::input_at(
                row,
                None,
                format!("ragged row: {} fields, header has {width}", rec.len()),
            ));
        }
        let label_cell = &rec[0];
        let label = label_cell
            .parse::<usize>()
            .ok()
            .filter(|&l| l >= 1)
            .ok_or_else(|| {
                Error::input_at(
                    row,
                    Some(1),
                    format!("unknown group label '{label_cell}' (expected a positive integer)"),
                )
            })?;
        let values = rec
            .iter()
            .enumerate()
            .skip(1)
            .map(|(c, cell)| match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::input_at(
                    row,
                    Some(c + 1),
                    format!("'{cell}' is not a finite number"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        labels.push(label);
        curves.push(Curve::from_vec_unchecked(values));
    }
    Ok((grid, labels, curves))
}

/// Writes the curves (not the derivatives) as a wide CSV.
pub fn save_csv(ds: &FunctionalDataset, path: impl AsRef<Path>) -> Result<()> {
    write_csv(ds, File::create(path)?)
}

pub fn write_csv(ds: &FunctionalDataset, writer: impl Write) -> Result<()> {
    write_wide(ds.grid(), &ds.labels(), ds.curves(), writer)
}

/// Writes the derivative channel (supplied or finite-difference) as a wide CSV.
pub fn save_derivatives_csv(ds: &FunctionalDataset, path: impl AsRef<Path>) -> Result<()> {
    write_wide(ds.grid(), &ds.labels(), &ds.derivative_curves(), File::create(path)?)
}

fn write_wide(grid: &Grid, labels: &[usize], curves: &[Curve], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["group".to_string()];
    // `{}` on f64 prints the shortest representation that round-trips exactly.
    header.extend(grid.points().iter().map(|p| format!("{p}")));
    w.write_record(&header)?;
    for (label, c) in labels.iter().zip(curves) {
        let mut rec = vec![label.to_string()];
        rec.extend(c.values().iter().map(|v| format!("{v}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct JsonRow {
    group: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct JsonDataset {
    grid: Vec<f64>,
    rows: Vec<JsonRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    derivatives: Option<Vec<Vec<f64>>>,
}

pub fn to_json(ds: &FunctionalDataset) -> Result<String> {
    let doc = JsonDataset {
        grid: ds.grid().points().to_vec(),
        rows: ds
            .labels()
            .into_iter()
            .zip(ds.curves())
            .map(|(group, c)| JsonRow {
                group,
                values: c.values().to_vec(),
            })
            .collect(),
        derivatives: ds
            .supplied_derivatives()
            .map(|d| d.iter().map(|c| c.values().to_vec()).collect()),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn from_json(text: &str) -> Result<FunctionalDataset> {
    let doc: JsonDataset = serde_json::from_str(text)?;
    let grid = Grid::from_points(doc.grid)?;
    let (labels, curves): (Vec<_>, Vec<_>) = doc
        .rows
        .into_iter()
        .map(|r| Curve::new(r.values).map(|c| (r.group, c)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let ds = FunctionalDataset::new(grid, curves, labels)?;
    match doc.derivatives {
        Some(d) => ds.with_derivatives(d.into_iter().map(Curve::new).collect::<Result<_>>()?),
        None => Ok(ds),
    }
}

pub fn save_json(ds: &FunctionalDataset, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(ds)?)?;
    Ok(())
}

pub fn load_json(path: impl AsRef<Path>) -> Result<FunctionalDataset> {
    from_json(&std::fs::read_to_string(path)?)
}

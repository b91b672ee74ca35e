//! CSV persistence for design matrices and datasets: row-major, one header
//! row naming the columns.

use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::harness::format_f64;

pub fn write_matrix_csv(path: impl AsRef<Path>, m: &DMatrix<f64>, column_prefix: &str) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record((1..=m.ncols()).map(|j| format!("{column_prefix}{j}")))?;
    for row in m.row_iter() {
        w.write_record(row.iter().map(|&v| format_f64(v)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    let mut r = csv::Reader::from_path(path)?;
    let ncols = r.headers()?.len();
    let mut data = Vec::new();
    let mut nrows = 0;
    for rec in r.records() {
        let rec = rec?;
        for field in rec.iter() {
            data.push(parse_cell(field)?);
        }
        nrows += 1;
    }
    Ok(DMatrix::from_row_slice(nrows, ncols, &data))
}

/// Columns `a_1..a_d, label`.
pub fn write_dataset_csv(path: impl AsRef<Path>, features: &DMatrix<f64>, labels: &DVector<f64>) -> Result<()> {
    if labels.len() != features.nrows() {
        return Err(Error::invalid("labels and features disagree on N"));
    }
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (1..=features.ncols()).map(|j| format!("a_{j}")).collect();
    header.push("label".into());
    w.write_record(&header)?;
    for (row, y) in features.row_iter().zip(labels.iter()) {
        let mut rec: Vec<String> = row.iter().map(|&v| format_f64(v)).collect();
        rec.push(format_f64(*y));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_dataset_csv(path: impl AsRef<Path>) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let m = read_matrix_csv(path)?;
    if m.ncols() < 2 {
        return Err(Error::invalid("dataset needs at least one feature column and a label column"));
    }
    let d = m.ncols() - 1;
    Ok((m.columns(0, d).into_owned(), m.column(d).into_owned()))
}

fn parse_cell(field: &str) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("cannot parse `{field}` as a number")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::synth_logistic_data;

    #[test]
    fn dataset_survives_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");
        let data = synth_logistic_data(7, 3, 0.5, 1).unwrap();
        write_dataset_csv(&path, &data.features, &data.labels).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("a_1,a_2,a_3,label\n"));
        let (f, l) = read_dataset_csv(&path).unwrap();
        assert_eq!(f, data.features);
        assert_eq!(l, data.labels);
    }
}

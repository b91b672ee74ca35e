//! Sweep CSVs.
//!
//! `<stem>_gap.csv`:
//! `model,kernel,lambda,h,h_max,admissible,trial_count,failures,mean_gap,stderr_gap,theory_lower_bound`
//!
//! `<stem>_acceptance.csv`:
//! `model,kernel,lambda,h,h_max,admissible,trial_count,failures,mean_acceptance,stderr_acceptance,theory_acceptance_floor`
//!
//! Reals are written with 17 significant digits; a missing bound is an
//! empty field.

use std::fs::File;
use std::path::{Path, PathBuf};

use super::experiment::ExperimentRow;
use super::format_f64;
use crate::error::Result;

pub const GAP_HEADER: [&str; 11] = [
    "model",
    "kernel",
    "lambda",
    "h",
    "h_max",
    "admissible",
    "trial_count",
    "failures",
    "mean_gap",
    "stderr_gap",
    "theory_lower_bound",
];

pub const ACCEPTANCE_HEADER: [&str; 11] = [
    "model",
    "kernel",
    "lambda",
    "h",
    "h_max",
    "admissible",
    "trial_count",
    "failures",
    "mean_acceptance",
    "stderr_acceptance",
    "theory_acceptance_floor",
];

fn opt(v: Option<f64>) -> String {
    v.map(format_f64).unwrap_or_default()
}

fn common(r: &ExperimentRow) -> Vec<String> {
    vec![
        r.model.to_string(),
        r.kernel.to_string(),
        format_f64(r.lambda),
        format_f64(r.h),
        format_f64(r.h_max),
        r.admissible().to_string(),
        r.trial_count.to_string(),
        r.failures.to_string(),
    ]
}

/// Writes the two sweep CSVs row by row.
pub struct RowWriter {
    gap: csv::Writer<File>,
    acceptance: csv::Writer<File>,
    paths: (PathBuf, PathBuf),
}

impl RowWriter {
    pub fn create(dir: impl AsRef<Path>, stem: &str) -> Result<Self> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let paths = (dir.join(format!("{stem}_gap.csv")), dir.join(format!("{stem}_acceptance.csv")));
        let mut gap = csv::Writer::from_path(&paths.0)?;
        let mut acceptance = csv::Writer::from_path(&paths.1)?;
        gap.write_record(GAP_HEADER)?;
        acceptance.write_record(ACCEPTANCE_HEADER)?;
        gap.flush()?;
        acceptance.flush()?;
        Ok(Self { gap, acceptance, paths })
    }

    pub fn write(&mut self, r: &ExperimentRow) -> Result<()> {
        let mut g = common(r);
        g.extend([format_f64(r.mean_gap), format_f64(r.stderr_gap), opt(r.theory_lower_bound)]);
        self.gap.write_record(&g)?;
        let mut a = common(r);
        a.extend([
            format_f64(r.mean_acceptance),
            format_f64(r.stderr_acceptance),
            opt(r.theory_acceptance_floor),
        ]);
        self.acceptance.write_record(&a)?;
        self.gap.flush()?;
        self.acceptance.flush()?;
        Ok(())
    }

    /// Paths of the gap and acceptance files.
    pub fn paths(&self) -> (&Path, &Path) {
        (&self.paths.0, &self.paths.1)
    }
}

pub fn write_rows(dir: impl AsRef<Path>, stem: &str, rows: &[ExperimentRow]) -> Result<(PathBuf, PathBuf)> {
    let mut w = RowWriter::create(dir, stem)?;
    for r in rows {
        w.write(r)?;
    }
    Ok(w.paths)
}

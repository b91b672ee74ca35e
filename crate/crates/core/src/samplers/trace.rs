//! Chain traces as CSV with columns `step, x_1..x_d, accepted`.
//!
//! `step` counts post-burn-in states from 0; `accepted` is `1` or `0`.

use std::path::Path;

use nalgebra::DVector;

use super::ChainResult;
use crate::error::{Error, Result};
use crate::harness::format_f64;

/// A chain read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub samples: Vec<DVector<f64>>,
    pub accept_flags: Vec<bool>,
}

impl Trace {
    pub fn acceptance_rate(&self) -> f64 {
        self.accept_flags.iter().filter(|&&a| a).count() as f64 / self.accept_flags.len().max(1) as f64
    }
}

pub fn write_trace_csv(path: impl AsRef<Path>, chain: &ChainResult) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let d = chain.dim();
    let mut header = vec!["step".to_string()];
    header.extend((1..=d).map(|i| format!("x_{i}")));
    header.push("accepted".into());
    w.write_record(&header)?;
    for (k, (x, &acc)) in chain.samples.iter().zip(&chain.accept_flags).enumerate() {
        let mut rec = Vec::with_capacity(d + 2);
        rec.push(k.to_string());
        rec.extend(x.iter().map(|&v| format_f64(v)));
        rec.push(if acc { "1" } else { "0" }.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace_csv(path: impl AsRef<Path>) -> Result<Trace> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.len() < 3 || &header[0] != "step" || &header[header.len() - 1] != "accepted" {
        return Err(Error::invalid("trace header must be `step, x_1..x_d, accepted`"));
    }
    let d = header.len() - 2;
    let mut samples = Vec::new();
    let mut accept_flags = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let mut x = DVector::zeros(d);
        for i in 0..d {
            x[i] = rec[i + 1]
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("row {}: bad value `{}`", line + 1, &rec[i + 1])))?;
        }
        let acc = match rec[d + 1].trim() {
            "1" | "true" => true,
            "0" | "false" => false,
            other => return Err(Error::invalid(format!("row {}: bad accepted flag `{other}`", line + 1))),
        };
        samples.push(x);
        accept_flags.push(acc);
    }
    Ok(Trace { samples, accept_flags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{run_chain, KernelKind, KernelSpec};
    use crate::targets::Gaussian;

    #[test]
    fn trace_round_trip_is_exact() {
        let pot = Gaussian::standard(2);
        let spec = KernelSpec::new(KernelKind::Mala, 0.4).unwrap();
        let chain = run_chain(&pot, &spec, &DVector::zeros(2), 200, 10, 1).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        write_trace_csv(&path, &chain).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("step,x_1,x_2,accepted\n"));
        let back = read_trace_csv(&path).unwrap();
        assert_eq!(back.samples, chain.samples);
        assert_eq!(back.accept_flags, chain.accept_flags);
    }
}

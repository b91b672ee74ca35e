use std::io::Write;

use log::warn;
use nalgebra::DVector;

use super::iact::iact_detailed;
use super::suite::TestFunctionSuite;
use crate::error::{Error, Result};
use crate::harness::format_f64;
use crate::samplers::ChainResult;

/// Per-function IACTs and the max-IACT gap estimate of one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct IactEstimate {
    pub labels: Vec<String>,
    pub per_function_iact: Vec<f64>,
    pub per_function_acf: Vec<Vec<f64>>,
    pub truncation_lags: Vec<usize>,
    /// `2 / (1 + max IACT)`.
    pub gap_estimate: f64,
    pub acceptance_rate: f64,
}

impl IactEstimate {
    pub fn max_iact(&self) -> f64 {
        self.per_function_iact.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Columns `function_label, iact, truncation_lag`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["function_label", "iact", "truncation_lag"])?;
        for ((label, tau), lag) in self.labels.iter().zip(&self.per_function_iact).zip(&self.truncation_lags) {
            w.write_record([label.clone(), format_f64(*tau), lag.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary_line(&self) -> String {
        format!(
            "gap_estimate={} max_iact={} acceptance={}",
            format_f64(self.gap_estimate),
            format_f64(self.max_iact()),
            format_f64(self.acceptance_rate)
        )
    }
}

pub fn estimate_gap(chain: &ChainResult, suite: &TestFunctionSuite) -> Result<IactEstimate> {
    estimate_gap_from_samples(&chain.samples, Some(&chain.log_densities), chain.acceptance_rate(), suite)
}

/// Gap estimate from raw samples. Test functions that cannot be evaluated
/// (no log densities) or give a constant series are dropped with a warning.
pub fn estimate_gap_from_samples(
    samples: &[DVector<f64>],
    log_densities: Option<&[f64]>,
    acceptance_rate: f64,
    suite: &TestFunctionSuite,
) -> Result<IactEstimate> {
    if let Some(ld) = log_densities {
        if ld.len() != samples.len() {
            return Err(Error::invalid("log densities and samples differ in length"));
        }
    }
    let mut est = IactEstimate {
        labels: Vec::new(),
        per_function_iact: Vec::new(),
        per_function_acf: Vec::new(),
        truncation_lags: Vec::new(),
        gap_estimate: f64::NAN,
        acceptance_rate,
    };
    for f in suite.functions() {
        let series: Option<Vec<f64>> = samples
            .iter()
            .enumerate()
            .map(|(k, x)| f.eval(x, log_densities.map(|ld| ld[k])))
            .collect();
        let Some(series) = series else {
            warn!("test function `{}` cannot be evaluated on this chain; dropped", f.label());
            continue;
        };
        match iact_detailed(&series) {
            Ok(detail) => {
                est.labels.push(f.label().to_string());
                est.per_function_iact.push(detail.iact);
                est.per_function_acf.push(detail.acf);
                est.truncation_lags.push(detail.truncation_lag);
            }
            Err(Error::DegenerateSeries(why)) => {
                warn!("test function `{}` dropped: {why}", f.label());
            }
            Err(e) => return Err(e),
        }
    }
    if est.labels.is_empty() {
        return Err(Error::DegenerateSeries("every test function series was degenerate".into()));
    }
    est.gap_estimate = 2.0 / (1.0 + est.max_iact());
    Ok(est)
}

/// Mean and standard error across independent trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSummary {
    pub n_trials: usize,
    pub mean_gap: f64,
    pub stderr_gap: f64,
    pub mean_acceptance: f64,
    pub stderr_acceptance: f64,
}

// Shifted by the first value so identical inputs give exactly zero spread.
fn mean_and_stderr(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let shift = values.clone().next().unwrap_or(0.0);
    let offset = values.clone().map(|v| v - shift).sum::<f64>() / n;
    let var = values.map(|v| (v - shift - offset).powi(2)).sum::<f64>() / (n - 1.0);
    (shift + offset, (var / n).sqrt())
}

pub fn aggregate_trials(estimates: &[IactEstimate]) -> Result<TrialSummary> {
    if estimates.len() < 2 {
        return Err(Error::invalid(format!("need at least 2 trials, got {}", estimates.len())));
    }
    let (mean_gap, stderr_gap) = mean_and_stderr(estimates.iter().map(|e| e.gap_estimate));
    let (mean_acceptance, stderr_acceptance) = mean_and_stderr(estimates.iter().map(|e| e.acceptance_rate));
    Ok(TrialSummary {
        n_trials: estimates.len(),
        mean_gap,
        stderr_gap,
        mean_acceptance,
        stderr_acceptance,
    })
}

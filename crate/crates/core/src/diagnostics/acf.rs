use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Normalized autocorrelation `ρ(0..=max_lag)` with the biased `1/K`
/// autocovariance `γ(k) = (1/K) Σ_{t<K−k} (x_t − x̄)(x_{t+k} − x̄)`.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if n < 4 * max_lag.max(1) {
        return Err(Error::invalid(format!(
            "series of length {n} is too short for max_lag {max_lag} (need at least 4·max_lag)"
        )));
    }
    let gamma = autocovariance(series, max_lag)?;
    let g0 = gamma[0];
    Ok(gamma.into_iter().map(|g| g / g0).collect())
}

/// Biased autocovariance through a zero-padded FFT.
pub(crate) fn autocovariance(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if n < 2 || series.iter().all(|&v| v == series[0]) {
        return Err(Error::DegenerateSeries("series is constant".into()));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("series has non-finite values"));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let size = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = series
        .iter()
        .map(|&v| Complex::new(v - mean, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(size)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    let scale = 1.0 / (size as f64 * n as f64);
    let gamma: Vec<f64> = buf.iter().take(max_lag.min(n - 1) + 1).map(|c| c.re * scale).collect();
    if !(gamma[0] > 0.0) {
        return Err(Error::DegenerateSeries("series has zero variance".into()));
    }
    Ok(gamma)
}

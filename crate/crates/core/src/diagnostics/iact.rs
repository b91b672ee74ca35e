use super::acf::autocovariance;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct IactDetail {
    pub iact: f64,
    /// Last lag included in the sum.
    pub truncation_lag: usize,
    /// `ρ(0..=truncation_lag + 1)`.
    pub acf: Vec<f64>,
}

/// Integrated autocorrelation time `1 + 2 Σ_{k=1}^{T} ρ(k)`, clipped below at 1.
pub fn iact(series: &[f64]) -> Result<f64> {
    iact_detailed(series).map(|d| d.iact)
}

/// IACT with Geyer's initial positive sequence: pairs `ρ(2j) + ρ(2j+1)` are
/// summed until the first nonpositive pair.
pub fn iact_detailed(series: &[f64]) -> Result<IactDetail> {
    let max_lag = (series.len() / 4).max(1);
    let gamma = autocovariance(series, max_lag)?;
    let rho: Vec<f64> = gamma.iter().map(|g| g / gamma[0]).collect();

    let mut pair_sum = 0.0;
    let mut pairs = 0;
    while 2 * pairs + 1 < rho.len() {
        let pair = rho[2 * pairs] + rho[2 * pairs + 1];
        if pair <= 0.0 {
            break;
        }
        pair_sum += pair;
        pairs += 1;
    }
    let tau = (2.0 * pair_sum - 1.0).max(1.0);
    let truncation_lag = (2 * pairs).saturating_sub(1);
    let keep = (truncation_lag + 2).min(rho.len());
    Ok(IactDetail {
        iact: tau,
        truncation_lag,
        acf: rho[..keep].to_vec(),
    })
}

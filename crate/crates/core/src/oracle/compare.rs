use nalgebra::DVector;

use super::{discretize_kernel, exact_gap};
use crate::diagnostics::{estimate_gap, IactEstimate, TestFunctionSuite};
use crate::error::Result;
use crate::samplers::{run_chain, KernelSpec};
use crate::targets::CompositePotential;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSettings {
    pub n_steps: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub x0: f64,
}

impl Default for ChainSettings {
    fn default() -> Self {
        Self {
            n_steps: 1_000_000,
            burn_in: 10_000,
            seed: 0,
            x0: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleComparison {
    pub oracle_gap: f64,
    pub estimated_gap: f64,
    /// `|estimated − oracle| / oracle`.
    pub relative_error: f64,
    pub estimate: IactEstimate,
}

/// Runs the IACT pipeline on one chain and compares it with the
/// discretized-kernel gap.
pub fn oracle_vs_estimate(
    pot: &dyn CompositePotential,
    spec: &KernelSpec,
    n: usize,
    radius: f64,
    settings: &ChainSettings,
) -> Result<OracleComparison> {
    let oracle_gap = exact_gap(&discretize_kernel(pot, spec, n, radius)?)?;
    let chain = run_chain(
        pot,
        spec,
        &DVector::from_element(1, settings.x0),
        settings.n_steps,
        settings.burn_in,
        settings.seed,
    )?;
    let suite = TestFunctionSuite::from_seed(1, settings.seed);
    let estimate = estimate_gap(&chain, &suite)?;
    Ok(OracleComparison {
        oracle_gap,
        estimated_gap: estimate.gap_estimate,
        relative_error: (estimate.gap_estimate - oracle_gap).abs() / oracle_gap,
        estimate,
    })
}

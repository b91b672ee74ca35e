use nalgebra::DVector;
use rand::Rng;

use super::{KernelSpec, MetropolisKernel, PointState};
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::targets::CompositePotential;

/// A seeded sample path. Only post-burn-in states are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainResult {
    pub samples: Vec<DVector<f64>>,
    /// `log π` at each entry of `samples`.
    pub log_densities: Vec<f64>,
    pub accept_flags: Vec<bool>,
    pub seed: u64,
    pub stream: u64,
    pub burn_in: usize,
    pub kernel: KernelSpec,
}

impl ChainResult {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.samples.first().map_or(0, |s| s.len())
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.accept_flags.is_empty() {
            return 0.0;
        }
        self.accept_flags.iter().filter(|&&a| a).count() as f64 / self.accept_flags.len() as f64
    }

    /// One coordinate as a series.
    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s[i]).collect()
    }
}

pub fn run_chain(
    pot: &dyn CompositePotential,
    spec: &KernelSpec,
    x0: &DVector<f64>,
    n_steps: usize,
    burn_in: usize,
    seed: u64,
) -> Result<ChainResult> {
    run_chain_stream(pot, spec, x0, n_steps, burn_in, seed, 0)
}

pub fn run_chain_stream(
    pot: &dyn CompositePotential,
    spec: &KernelSpec,
    x0: &DVector<f64>,
    n_steps: usize,
    burn_in: usize,
    seed: u64,
    stream: u64,
) -> Result<ChainResult> {
    let kernel = spec.build();
    run_chain_from(pot, kernel.as_ref(), x0, n_steps, burn_in, seed, stream)
}

/// Runs `burn_in + n_steps` Metropolis steps of `kernel` from `x0`.
///
/// Each step draws the proposal, then `u ~ U(0, 1)`, and accepts iff
/// `log u < a(x, x')`. Rejection keeps the current state bit for bit.
pub fn run_chain_from(
    pot: &dyn CompositePotential,
    kernel: &dyn MetropolisKernel,
    x0: &DVector<f64>,
    n_steps: usize,
    burn_in: usize,
    seed: u64,
    stream: u64,
) -> Result<ChainResult> {
    if n_steps == 0 {
        return Err(Error::invalid("chain length must be at least 1"));
    }
    if x0.len() != pot.dim() {
        return Err(Error::invalid(format!(
            "initial state has dimension {}, target has {}",
            x0.len(),
            pot.dim()
        )));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("initial state has non-finite components"));
    }

    let with_drift = kernel.needs_drift();
    let mut rng = stream_rng(seed, stream);
    let mut current = PointState::evaluate(pot, x0.clone(), with_drift);
    if !current.drift_is_finite() {
        return Err(Error::DivergedChain { step: 0, state: current.x });
    }

    let mut samples = Vec::with_capacity(n_steps);
    let mut log_densities = Vec::with_capacity(n_steps);
    let mut accept_flags = Vec::with_capacity(n_steps);

    for step in 0..burn_in + n_steps {
        let proposal = kernel.propose(&current, &mut rng);
        if proposal.iter().any(|v| !v.is_finite()) {
            return Err(Error::DivergedChain { step, state: current.x });
        }
        let candidate = PointState::evaluate(pot, proposal, with_drift);
        if !candidate.drift_is_finite() {
            return Err(Error::DivergedChain { step, state: candidate.x });
        }
        let log_ratio = kernel.log_accept_ratio(&current, &candidate);
        let u: f64 = rng.random();
        let accepted = u.ln() < log_ratio;
        if accepted {
            current = candidate;
        }
        if step >= burn_in {
            samples.push(current.x.clone());
            log_densities.push(current.log_density);
            accept_flags.push(accepted);
        }
    }

    Ok(ChainResult {
        samples,
        log_densities,
        accept_flags,
        seed,
        stream,
        burn_in,
        kernel: kernel.spec(),
    })
}

use std::f64::consts::PI;

use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};

use super::{KernelKind, KernelSpec, MetropolisKernel, PointState};
use crate::error::{Error, Result};
use crate::rng::ChainRng;
use crate::targets::{drift_vector, CompositePotential};

/// Proposal mean `x + h·v(x)`.
pub fn mala_mean(pot: &dyn CompositePotential, x: &DVector<f64>, h: f64) -> Result<DVector<f64>> {
    let drift = drift_vector(pot, x)?;
    if drift.iter().any(|v| !v.is_finite()) {
        return Err(Error::DivergedChain { step: 0, state: x.clone() });
    }
    Ok(x + drift * h)
}

/// `x + h·v(x) + √(2h)·ξ` with the minimal-norm subgradient drift.
pub fn mala_propose(pot: &dyn CompositePotential, x: &DVector<f64>, h: f64, rng: &mut ChainRng) -> Result<DVector<f64>> {
    let mean = mala_mean(pot, x, h)?;
    Ok(perturb(&mean, (2.0 * h).sqrt(), rng))
}

fn perturb(mean: &DVector<f64>, scale: f64, rng: &mut ChainRng) -> DVector<f64> {
    mean.map(|m| {
        let z: f64 = StandardNormal.sample(rng);
        m + scale * z
    })
}

/// Subgradient MALA: proposal `N(x + h v(x), 2h I)` where `v = ∇f + v_s`.
#[derive(Debug, Clone, Copy)]
pub struct Mala {
    step_h: f64,
}

impl Mala {
    pub fn new(step_h: f64) -> Self {
        Self { step_h }
    }

    fn mean(&self, at: &PointState) -> DVector<f64> {
        &at.x + at.drift() * self.step_h
    }
}

impl MetropolisKernel for Mala {
    fn spec(&self) -> KernelSpec {
        KernelSpec {
            kind: KernelKind::Mala,
            step_h: self.step_h,
        }
    }

    fn needs_drift(&self) -> bool {
        true
    }

    fn propose(&self, at: &PointState, rng: &mut ChainRng) -> DVector<f64> {
        perturb(&self.mean(at), (2.0 * self.step_h).sqrt(), rng)
    }

    fn log_proposal_density(&self, from: &PointState, to: &DVector<f64>) -> f64 {
        let var = 2.0 * self.step_h;
        let d = to.len() as f64;
        -(to - self.mean(from)).norm_squared() / (2.0 * var) - 0.5 * d * (2.0 * PI * var).ln()
    }

    fn log_proposal_ratio(&self, from: &PointState, to: &PointState) -> f64 {
        let back = (&from.x - self.mean(to)).norm_squared();
        let fwd = (&to.x - self.mean(from)).norm_squared();
        (fwd - back) / (4.0 * self.step_h)
    }
}

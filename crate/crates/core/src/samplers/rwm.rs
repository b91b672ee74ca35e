use std::f64::consts::PI;

use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};

use super::{KernelKind, KernelSpec, MetropolisKernel, PointState};
use crate::rng::ChainRng;

/// `x + h·ξ`, `ξ ~ N(0, I)`.
pub fn rwm_propose(x: &DVector<f64>, h: f64, rng: &mut ChainRng) -> DVector<f64> {
    x.map(|xi| {
        let z: f64 = StandardNormal.sample(rng);
        xi + h * z
    })
}

/// Random-walk Metropolis with proposal `N(x, h² I)`.
#[derive(Debug, Clone, Copy)]
pub struct Rwm {
    step_h: f64,
}

impl Rwm {
    pub fn new(step_h: f64) -> Self {
        Self { step_h }
    }
}

impl MetropolisKernel for Rwm {
    fn spec(&self) -> KernelSpec {
        KernelSpec {
            kind: KernelKind::Rwm,
            step_h: self.step_h,
        }
    }

    fn needs_drift(&self) -> bool {
        false
    }

    fn propose(&self, at: &PointState, rng: &mut ChainRng) -> DVector<f64> {
        rwm_propose(&at.x, self.step_h, rng)
    }

    fn log_proposal_density(&self, from: &PointState, to: &DVector<f64>) -> f64 {
        let var = self.step_h * self.step_h;
        let d = to.len() as f64;
        -(to - &from.x).norm_squared() / (2.0 * var) - 0.5 * d * (2.0 * PI * var).ln()
    }

    // Symmetric proposal.
    fn log_proposal_ratio(&self, _from: &PointState, _to: &PointState) -> f64 {
        0.0
    }
}

//! Metropolis kernels and the seeded chain runner.
//!
//! A kernel is a proposal strategy plus the Metropolis accept/reject step.
//! Both built-in strategies implement [`MetropolisKernel`] and are looked up
//! by name through [`KernelRegistry`].

mod chain;
mod mala;
mod registry;
mod rwm;
mod trace;

pub use chain::{run_chain, run_chain_from, run_chain_stream, ChainResult};
pub use mala::{mala_mean, mala_propose, Mala};
pub use registry::{KernelBuilder, KernelRegistry};
pub use rwm::{rwm_propose, Rwm};
pub use trace::{read_trace_csv, write_trace_csv, Trace};

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::rng::ChainRng;
use crate::targets::CompositePotential;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelKind {
    Rwm,
    Mala,
}

impl KernelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            KernelKind::Rwm => "rwm",
            KernelKind::Mala => "mala",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rwm" => Ok(KernelKind::Rwm),
            "mala" => Ok(KernelKind::Mala),
            other => Err(Error::UnknownName {
                kind: "kernel",
                name: other.to_string(),
                known: "rwm, mala".into(),
            }),
        }
    }
}

/// Which kernel, and its step size `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub step_h: f64,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, step_h: f64) -> Result<Self> {
        if !(step_h > 0.0 && step_h.is_finite()) {
            return Err(Error::invalid(format!("step size must be positive and finite, got {step_h}")));
        }
        Ok(Self { kind, step_h })
    }

    pub fn build(&self) -> Box<dyn MetropolisKernel> {
        match self.kind {
            KernelKind::Rwm => Box::new(Rwm::new(self.step_h)),
            KernelKind::Mala => Box::new(Mala::new(self.step_h)),
        }
    }
}

/// A point together with the target quantities the kernels reuse.
#[derive(Debug, Clone, PartialEq)]
pub struct PointState {
    pub x: DVector<f64>,
    pub log_density: f64,
    /// `∇f + v_s` at `x`; only kernels that use it ask for it.
    pub drift: Option<DVector<f64>>,
}

impl PointState {
    pub fn evaluate(pot: &dyn CompositePotential, x: DVector<f64>, with_drift: bool) -> Self {
        if with_drift {
            let (log_density, drift) = pot.value_and_drift(&x);
            Self {
                x,
                log_density,
                drift: Some(drift),
            }
        } else {
            Self {
                log_density: pot.log_density(&x),
                x,
                drift: None,
            }
        }
    }

    fn drift(&self) -> &DVector<f64> {
        self.drift.as_ref().expect("kernel requires a drift but the state was evaluated without one")
    }

    fn drift_is_finite(&self) -> bool {
        self.drift.as_ref().is_none_or(|v| v.iter().all(|c| c.is_finite()))
    }
}

pub trait MetropolisKernel: Send + Sync {
    fn spec(&self) -> KernelSpec;

    fn name(&self) -> &'static str {
        self.spec().kind.as_str()
    }

    fn needs_drift(&self) -> bool;

    fn propose(&self, at: &PointState, rng: &mut ChainRng) -> DVector<f64>;

    /// Normalized `log Q(from, to)`.
    fn log_proposal_density(&self, from: &PointState, to: &DVector<f64>) -> f64;

    /// `log Q(to, from) − log Q(from, to)`.
    fn log_proposal_ratio(&self, from: &PointState, to: &PointState) -> f64 {
        self.log_proposal_density(to, &from.x) - self.log_proposal_density(from, &to.x)
    }

    /// `a(x, x') = log[π(x')Q(x', x)] − log[π(x)Q(x, x')]`.
    fn log_accept_ratio(&self, from: &PointState, to: &PointState) -> f64 {
        to.log_density - from.log_density + self.log_proposal_ratio(from, to)
    }
}

/// Metropolis log acceptance ratio between two points; the acceptance
/// probability is `exp(min(0, a))`.
pub fn log_accept_ratio(pot: &dyn CompositePotential, spec: &KernelSpec, x: &DVector<f64>, x_new: &DVector<f64>) -> f64 {
    let kernel = spec.build();
    let drift = kernel.needs_drift();
    let from = PointState::evaluate(pot, x.clone(), drift);
    let to = PointState::evaluate(pot, x_new.clone(), drift);
    kernel.log_accept_ratio(&from, &to)
}

pub fn acceptance_probability(log_ratio: f64) -> f64 {
    log_ratio.min(0.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::targets::{lasso_design_matrix, make_bayesian_lasso, Gaussian};
    use nalgebra::DMatrix;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn spec_rejects_bad_steps() {
        assert!(KernelSpec::new(KernelKind::Rwm, 0.0).is_err());
        assert!(KernelSpec::new(KernelKind::Mala, f64::INFINITY).is_err());
        assert!(KernelSpec::new(KernelKind::Mala, -1.0).is_err());
        assert!(KernelSpec::new(KernelKind::Rwm, 0.3).is_ok());
    }

    #[test]
    fn identical_points_have_zero_ratio() {
        let pot = make_bayesian_lasso(DMatrix::identity(3, 3), DVector::zeros(3), 1.0).unwrap();
        let x = DVector::from_vec(vec![0.1, -0.4, 2.0]);
        for kind in [KernelKind::Rwm, KernelKind::Mala] {
            let spec = KernelSpec::new(kind, 0.2).unwrap();
            assert_eq!(log_accept_ratio(&pot, &spec, &x, &x), 0.0);
        }
    }

    #[test]
    fn rwm_standard_gaussian_ratio() {
        let pot = Gaussian::standard(1);
        let spec = KernelSpec::new(KernelKind::Rwm, 1.0).unwrap();
        let a = log_accept_ratio(&pot, &spec, &DVector::zeros(1), &DVector::from_element(1, 1.0));
        assert_eq!(a, -0.5);
        assert!((acceptance_probability(a) - 0.6065306597126334).abs() < 1e-15);
    }

    #[test]
    fn ratio_is_antisymmetric() {
        let pot = make_bayesian_lasso(lasso_design_matrix(5, 0.5, 3), DVector::from_element(5, 0.2), 1.3).unwrap();
        let mut rng = stream_rng(4, 0);
        for kind in [KernelKind::Rwm, KernelKind::Mala] {
            let spec = KernelSpec::new(kind, 0.05).unwrap();
            for _ in 0..100 {
                let x = DVector::from_fn(5, |_, _| StandardNormal.sample(&mut rng));
                let y = &x + DVector::from_fn(5, |_, _| 0.3 * Distribution::<f64>::sample(&StandardNormal, &mut rng));
                let sum = log_accept_ratio(&pot, &spec, &x, &y) + log_accept_ratio(&pot, &spec, &y, &x);
                assert!(sum.abs() <= 1e-10, "{kind}: {sum}");
            }
        }
    }

    #[test]
    fn detailed_balance_in_log_space() {
        // π(x)Q(x,x')α(x,x') = π(x')Q(x',x)α(x',x)
        let pot = make_bayesian_lasso(lasso_design_matrix(4, 0.5, 8), DVector::zeros(4), 2.0).unwrap();
        let mut rng = stream_rng(5, 0);
        for kind in [KernelKind::Rwm, KernelKind::Mala] {
            let kernel = KernelSpec::new(kind, 0.1).unwrap().build();
            for _ in 0..100 {
                let x = PointState::evaluate(&pot, DVector::from_fn(4, |_, _| StandardNormal.sample(&mut rng)), true);
                let y = PointState::evaluate(&pot, &x.x + DVector::from_fn(4, |_, _| 0.4 * Distribution::<f64>::sample(&StandardNormal, &mut rng)), true);
                let forward = x.log_density + kernel.log_proposal_density(&x, &y.x) + kernel.log_accept_ratio(&x, &y).min(0.0);
                let backward = y.log_density + kernel.log_proposal_density(&y, &x.x) + kernel.log_accept_ratio(&y, &x).min(0.0);
                assert!((forward - backward).abs() < 1e-10);
            }
        }
    }
}

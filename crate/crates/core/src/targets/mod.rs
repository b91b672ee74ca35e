//! Composite targets `log π = f + g`.
//!
//! `f` is differentiable with an `M`-Lipschitz gradient, `g` is concave and
//! `L`-Lipschitz but may have kinks. Every target reports both parts
//! separately so the samplers can form the drift `∇f + v_s` where `v_s` is the
//! minimal-norm element of `∂g`.

mod gaussian;
mod io;
mod l1;
mod lasso;
mod logistic;
mod registry;

pub use gaussian::Gaussian;
pub use io::{read_dataset_csv, read_matrix_csv, write_dataset_csv, write_matrix_csv};
pub use l1::{l1_min_norm_subgrad, l1_prox, l1_value};
pub use lasso::{lasso_design_matrix, make_bayesian_lasso, LassoModel};
pub use logistic::{make_logistic_laplace, synth_logistic_data, LogisticData, LogisticModel};
pub use registry::{ModelKind, ModelParams, TargetBuilder, TargetRegistry};

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Regularity constants of a composite target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularity {
    /// Lipschitz constant of `∇f`.
    pub smoothness_m: f64,
    /// Lipschitz constant of `g`.
    pub lipschitz_l: f64,
    /// `m` when `π` is `m`-strongly log-concave.
    pub strong_concavity_m: Option<f64>,
    pub f_concave: bool,
}

impl Regularity {
    pub fn condition_number(&self) -> Option<f64> {
        self.strong_concavity_m.map(|m| self.smoothness_m / m)
    }
}

pub trait CompositePotential: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    /// `f(x)`.
    fn smooth_value(&self, x: &DVector<f64>) -> f64;

    /// `∇f(x)`.
    fn smooth_grad(&self, x: &DVector<f64>) -> DVector<f64>;

    /// `g(x)`.
    fn nonsmooth_value(&self, x: &DVector<f64>) -> f64;

    /// Minimal-norm element of `∂g(x)`.
    fn nonsmooth_subgrad(&self, x: &DVector<f64>) -> DVector<f64>;

    /// `argmax_z g(z) − ‖z − x‖² / (2 step)`.
    fn prox_nonsmooth(&self, x: &DVector<f64>, step: f64) -> DVector<f64>;

    fn regularity(&self) -> Regularity;

    /// `log π(x)` up to an additive constant.
    fn log_density(&self, x: &DVector<f64>) -> f64 {
        self.smooth_value(x) + self.nonsmooth_value(x)
    }

    /// `(log π(x), ∇f(x) + v_s(x))` in one pass. Targets override this when
    /// the two share work.
    fn value_and_drift(&self, x: &DVector<f64>) -> (f64, DVector<f64>) {
        (
            self.log_density(x),
            self.smooth_grad(x) + self.nonsmooth_subgrad(x),
        )
    }
}

fn check_finite(x: &DVector<f64>) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::invalid(format!("point has non-finite components: {x:?}")))
    }
}

/// Langevin drift `v(x) = ∇f(x) + v_s(x)` with the minimal-norm subgradient.
pub fn drift_vector(pot: &dyn CompositePotential, x: &DVector<f64>) -> Result<DVector<f64>> {
    check_finite(x)?;
    if x.len() != pot.dim() {
        return Err(Error::invalid(format!(
            "point has dimension {}, target has {}",
            x.len(),
            pot.dim()
        )));
    }
    Ok(pot.smooth_grad(x) + pot.nonsmooth_subgrad(x))
}

/// Maximizes `log π` by proximal gradient ascent with step `1/M`.
pub fn find_mode(pot: &dyn CompositePotential, x0: &DVector<f64>, iterations: usize) -> DVector<f64> {
    let m = pot.regularity().smoothness_m;
    let step = if m > 0.0 { 1.0 / m } else { 1.0 };
    let mut x = x0.clone();
    for _ in 0..iterations {
        let ascent = &x + pot.smooth_grad(&x) * step;
        x = pot.prox_nonsmooth(&ascent, step);
    }
    x
}

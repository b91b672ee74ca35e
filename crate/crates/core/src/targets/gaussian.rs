use nalgebra::DVector;

use super::{CompositePotential, Regularity};

/// Isotropic centred Gaussian `N(0, σ² I)`; the non-smooth part is zero.
#[derive(Debug, Clone)]
pub struct Gaussian {
    dim: usize,
    precision: f64,
}

impl Gaussian {
    pub fn standard(dim: usize) -> Self {
        Self::isotropic(dim, 1.0)
    }

    pub fn isotropic(dim: usize, variance: f64) -> Self {
        assert!(dim >= 1 && variance > 0.0);
        Self {
            dim,
            precision: 1.0 / variance,
        }
    }

    pub fn variance(&self) -> f64 {
        1.0 / self.precision
    }
}

impl CompositePotential for Gaussian {
    fn name(&self) -> &str {
        "gaussian"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn smooth_value(&self, x: &DVector<f64>) -> f64 {
        -0.5 * self.precision * x.norm_squared()
    }

    fn smooth_grad(&self, x: &DVector<f64>) -> DVector<f64> {
        x * -self.precision
    }

    fn nonsmooth_value(&self, _x: &DVector<f64>) -> f64 {
        0.0
    }

    fn nonsmooth_subgrad(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::zeros(x.len())
    }

    fn prox_nonsmooth(&self, x: &DVector<f64>, _step: f64) -> DVector<f64> {
        x.clone()
    }

    fn regularity(&self) -> Regularity {
        Regularity {
            smoothness_m: self.precision,
            lipschitz_l: 0.0,
            strong_concavity_m: Some(self.precision),
            f_concave: true,
        }
    }
}

use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};

use crate::rng::stream_rng;

/// Stream id used to draw the probe vector `ξ` from an experiment seed.
pub const PROBE_STREAM: u64 = 0x50_524f_4245;

/// A scalar observable evaluated along a chain.
pub trait TestFunction: Send + Sync {
    fn label(&self) -> &str;

    /// `None` when the function needs data the caller does not have (e.g.
    /// `log π` for a trace read from disk).
    fn eval(&self, x: &DVector<f64>, log_density: Option<f64>) -> Option<f64>;
}

struct LogDensity;

impl TestFunction for LogDensity {
    fn label(&self) -> &str {
        "log_density"
    }

    fn eval(&self, _x: &DVector<f64>, log_density: Option<f64>) -> Option<f64> {
        log_density
    }
}

struct L1Norm;

impl TestFunction for L1Norm {
    fn label(&self) -> &str {
        "l1_norm"
    }

    fn eval(&self, x: &DVector<f64>, _: Option<f64>) -> Option<f64> {
        Some(x.lp_norm(1))
    }
}

struct SquaredNorm;

impl TestFunction for SquaredNorm {
    fn label(&self) -> &str {
        "sq_norm"
    }

    fn eval(&self, x: &DVector<f64>, _: Option<f64>) -> Option<f64> {
        Some(x.norm_squared())
    }
}

struct ProbeLinear(DVector<f64>);

impl TestFunction for ProbeLinear {
    fn label(&self) -> &str {
        "probe_linear"
    }

    fn eval(&self, x: &DVector<f64>, _: Option<f64>) -> Option<f64> {
        Some(self.0.dot(x))
    }
}

/// `ξᵀ cos(x)` with `cos` applied elementwise.
struct ProbeCos(DVector<f64>);

impl TestFunction for ProbeCos {
    fn label(&self) -> &str {
        "probe_cos"
    }

    fn eval(&self, x: &DVector<f64>, _: Option<f64>) -> Option<f64> {
        Some(self.0.iter().zip(x.iter()).map(|(p, v)| p * v.cos()).sum())
    }
}

/// `{log π, ‖x‖₁, ‖x‖², ξᵀx, ξᵀcos(x)}` by default, extensible with
/// [`TestFunctionSuite::push`].
pub struct TestFunctionSuite {
    functions: Vec<Box<dyn TestFunction>>,
    probe_xi: DVector<f64>,
}

impl TestFunctionSuite {
    pub fn standard(probe_xi: DVector<f64>) -> Self {
        let functions: Vec<Box<dyn TestFunction>> = vec![
            Box::new(LogDensity),
            Box::new(L1Norm),
            Box::new(SquaredNorm),
            Box::new(ProbeLinear(probe_xi.clone())),
            Box::new(ProbeCos(probe_xi.clone())),
        ];
        Self { functions, probe_xi }
    }

    /// Standard suite with `ξ ~ N(0, I_d)` drawn from `seed`.
    pub fn from_seed(dim: usize, seed: u64) -> Self {
        let mut rng = stream_rng(seed, PROBE_STREAM);
        let xi = DVector::from_fn(dim, |_, _| StandardNormal.sample(&mut rng));
        Self::standard(xi)
    }

    pub fn empty(probe_xi: DVector<f64>) -> Self {
        Self {
            functions: Vec::new(),
            probe_xi,
        }
    }

    pub fn push(&mut self, f: Box<dyn TestFunction>) {
        self.functions.push(f);
    }

    pub fn probe_xi(&self) -> &DVector<f64> {
        &self.probe_xi
    }

    pub fn labels(&self) -> Vec<&str> {
        self.functions.iter().map(|f| f.label()).collect()
    }

    pub fn functions(&self) -> &[Box<dyn TestFunction>] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_suite_values() {
        let suite = TestFunctionSuite::standard(DVector::from_vec(vec![1.0, -2.0]));
        assert_eq!(suite.labels(), vec!["log_density", "l1_norm", "sq_norm", "probe_linear", "probe_cos"]);
        let x = DVector::from_vec(vec![0.0, -3.0]);
        let vals: Vec<Option<f64>> = suite.functions().iter().map(|f| f.eval(&x, Some(-4.5))).collect();
        assert_eq!(vals[0], Some(-4.5));
        assert_eq!(vals[1], Some(3.0));
        assert_eq!(vals[2], Some(9.0));
        assert_eq!(vals[3], Some(6.0));
        assert!((vals[4].unwrap() - (1.0 - 2.0 * 3f64.cos())).abs() < 1e-15);
        assert_eq!(suite.functions()[0].eval(&x, None), None);
    }

    #[test]
    fn probe_is_frozen_per_seed() {
        assert_eq!(TestFunctionSuite::from_seed(4, 1).probe_xi(), TestFunctionSuite::from_seed(4, 1).probe_xi());
        assert_ne!(TestFunctionSuite::from_seed(4, 1).probe_xi(), TestFunctionSuite::from_seed(4, 2).probe_xi());
    }
}

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::l1::{l1_min_norm_subgrad, l1_prox, l1_value};
use super::{CompositePotential, Regularity};
use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// `log(1 + eᵗ)` without overflow for large `|t|`.
pub(crate) fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

pub(crate) fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Synthetic logistic-regression data with a sparse ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticData {
    /// `N × d`, rows are the feature vectors `aᵢ`.
    pub features: DMatrix<f64>,
    /// Entries in `{0, 1}`.
    pub labels: DVector<f64>,
    pub true_coef: DVector<f64>,
}

/// Posterior of logistic regression with a Laplace prior:
/// `log π(x) = −Σᵢ [log(1 + exp(aᵢᵀx)) − yᵢ aᵢᵀx] − λ‖x‖₁`.
#[derive(Debug, Clone)]
pub struct LogisticModel {
    features: DMatrix<f64>,
    labels: DVector<f64>,
    lambda: f64,
    regularity: Regularity,
}

impl LogisticModel {
    pub fn features(&self) -> &DMatrix<f64> {
        &self.features
    }

    pub fn labels(&self) -> &DVector<f64> {
        &self.labels
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn smooth_parts(&self, x: &DVector<f64>) -> (f64, DVector<f64>) {
        let margins = &self.features * x;
        let mut value = 0.0;
        let mut residual = DVector::zeros(margins.len());
        for (i, &t) in margins.iter().enumerate() {
            let y = self.labels[i];
            value -= softplus(t) - y * t;
            residual[i] = y - sigmoid(t);
        }
        (value, self.features.tr_mul(&residual))
    }
}

pub fn make_logistic_laplace(features: DMatrix<f64>, labels: DVector<f64>, lambda: f64) -> Result<LogisticModel> {
    let (n, d) = features.shape();
    if n == 0 || d == 0 {
        return Err(Error::invalid("features must be a nonempty matrix"));
    }
    if labels.len() != n {
        return Err(Error::invalid(format!("{} labels for {n} feature rows", labels.len())));
    }
    if let Some((i, y)) = labels.iter().enumerate().find(|(_, &y)| y != 0.0 && y != 1.0) {
        return Err(Error::invalid(format!("label {i} is {y}, expected 0 or 1")));
    }
    if features.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("features have non-finite entries"));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!("lambda must be finite and nonnegative, got {lambda}")));
    }
    // σ' ≤ ¼, so ∇f is ¼·λ_max(Σ aᵢaᵢᵀ)-Lipschitz.
    let scatter = features.tr_mul(&features);
    let largest = SymmetricEigen::new(scatter).eigenvalues.max();
    Ok(LogisticModel {
        regularity: Regularity {
            smoothness_m: 0.25 * largest,
            lipschitz_l: lambda * (d as f64).sqrt(),
            strong_concavity_m: None,
            f_concave: true,
        },
        features,
        labels,
        lambda,
    })
}

/// Gaussian features, a `⌈sparsity·d⌉`-sparse Gaussian ground truth at
/// uniformly random positions, and Bernoulli(σ(aᵢᵀx*)) labels.
pub fn synth_logistic_data(n_obs: usize, d: usize, sparsity: f64, seed: u64) -> Result<LogisticData> {
    if n_obs == 0 || d == 0 {
        return Err(Error::invalid("N and d must be positive"));
    }
    if !(sparsity > 0.0 && sparsity <= 1.0) {
        return Err(Error::invalid(format!("sparsity must lie in (0, 1], got {sparsity}")));
    }
    let mut rng = stream_rng(seed, 0);
    let features = DMatrix::from_fn(n_obs, d, |_, _| StandardNormal.sample(&mut rng));
    let nonzeros = ((sparsity * d as f64) - 1e-9).ceil().max(1.0) as usize;
    let mut true_coef = DVector::zeros(d);
    for pos in sample(&mut rng, d, nonzeros.min(d)).into_iter() {
        true_coef[pos] = StandardNormal.sample(&mut rng);
    }
    let margins = &features * &true_coef;
    let labels = margins.map(|t| if rng.random::<f64>() < sigmoid(t) { 1.0 } else { 0.0 });
    Ok(LogisticData {
        features,
        labels,
        true_coef,
    })
}

impl CompositePotential for LogisticModel {
    fn name(&self) -> &str {
        "logistic"
    }

    fn dim(&self) -> usize {
        self.features.ncols()
    }

    fn smooth_value(&self, x: &DVector<f64>) -> f64 {
        self.smooth_parts(x).0
    }

    fn smooth_grad(&self, x: &DVector<f64>) -> DVector<f64> {
        self.smooth_parts(x).1
    }

    fn nonsmooth_value(&self, x: &DVector<f64>) -> f64 {
        l1_value(x, self.lambda)
    }

    fn nonsmooth_subgrad(&self, x: &DVector<f64>) -> DVector<f64> {
        l1_min_norm_subgrad(x, self.lambda)
    }

    fn prox_nonsmooth(&self, x: &DVector<f64>, step: f64) -> DVector<f64> {
        l1_prox(x, self.lambda, step)
    }

    fn regularity(&self) -> Regularity {
        self.regularity
    }

    fn value_and_drift(&self, x: &DVector<f64>) -> (f64, DVector<f64>) {
        let (f, grad) = self.smooth_parts(x);
        (
            f + l1_value(x, self.lambda),
            grad + l1_min_norm_subgrad(x, self.lambda),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::testing::{central_difference_grad, points_off_kinks};

    #[test]
    fn single_observation_at_origin() {
        let pot = make_logistic_laplace(DMatrix::from_element(1, 1, 1.0), DVector::from_element(1, 1.0), 0.0).unwrap();
        assert!((pot.log_density(&DVector::zeros(1)) + 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn gradient_at_origin() {
        let data = synth_logistic_data(40, 5, 0.4, 3).unwrap();
        let pot = make_logistic_laplace(data.features.clone(), data.labels.clone(), 1.0).unwrap();
        let expected = data.features.tr_mul(&data.labels.map(|y| y - 0.5));
        assert!((pot.smooth_grad(&DVector::zeros(5)) - expected).norm() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let data = synth_logistic_data(200, 8, 0.25, 12).unwrap();
        let pot = make_logistic_laplace(data.features, data.labels, 0.5).unwrap();
        for x in points_off_kinks(8, 20, 0.5, 1e-3, 77) {
            let fd = central_difference_grad(&pot, &x, 1e-5);
            let g = pot.smooth_grad(&x);
            assert!((&g - &fd).norm() <= 1e-6 * g.norm().max(1.0), "{g} vs {fd}");
        }
    }

    #[test]
    fn bad_label_is_rejected() {
        let err = make_logistic_laplace(DMatrix::zeros(2, 1), DVector::from_vec(vec![0.0, 2.0]), 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn softplus_is_stable_for_large_margins() {
        assert_eq!(softplus(700.0), 700.0);
        assert!(softplus(-700.0) > 0.0 && softplus(-700.0) < 1e-300);
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-16);
        let pot = make_logistic_laplace(DMatrix::from_element(1, 1, 1.0), DVector::from_element(1, 0.0), 0.0).unwrap();
        let v = pot.log_density(&DVector::from_element(1, 710.0));
        assert!((v + 710.0).abs() < 1e-9);
    }

    #[test]
    fn sparsity_count() {
        let data = synth_logistic_data(10, 50, 0.1, 4).unwrap();
        assert_eq!(data.true_coef.iter().filter(|&&c| c != 0.0).count(), 5);
    }

    #[test]
    fn synthesis_is_deterministic() {
        assert_eq!(synth_logistic_data(30, 6, 0.5, 8).unwrap(), synth_logistic_data(30, 6, 0.5, 8).unwrap());
    }

    #[test]
    fn label_mean_matches_generator_probabilities() {
        let data = synth_logistic_data(20_000, 10, 0.3, 21).unwrap();
        let probs = (&data.features * &data.true_coef).map(sigmoid);
        let n = probs.len() as f64;
        let expected = probs.sum() / n;
        let var: f64 = probs.iter().map(|p| p * (1.0 - p)).sum::<f64>() / (n * n);
        let observed = data.labels.sum() / n;
        assert!((observed - expected).abs() <= 4.0 * var.sqrt(), "{observed} vs {expected}");
    }

    #[test]
    fn metadata() {
        let data = synth_logistic_data(100, 9, 0.2, 2).unwrap();
        let pot = make_logistic_laplace(data.features.clone(), data.labels, 2.0).unwrap();
        let reg = pot.regularity();
        assert_eq!(reg.strong_concavity_m, None);
        assert!(reg.f_concave);
        assert!((reg.lipschitz_l - 6.0).abs() < 1e-15);
        let top = SymmetricEigen::new(data.features.tr_mul(&data.features)).eigenvalues.max();
        assert!((reg.smoothness_m - top / 4.0).abs() < 1e-9);
    }
}

use log::warn;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};

use super::l1::{l1_min_norm_subgrad, l1_prox, l1_value};
use super::{CompositePotential, Regularity};
use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Bayesian Lasso posterior `π(x) ∝ exp(−½‖Ax − y‖² − λ‖x‖₁)`.
#[derive(Debug, Clone)]
pub struct LassoModel {
    design: DMatrix<f64>,
    observation: DVector<f64>,
    lambda: f64,
    gram: DMatrix<f64>,
    design_t_obs: DVector<f64>,
    obs_sq: f64,
    regularity: Regularity,
}

impl LassoModel {
    pub fn design(&self) -> &DMatrix<f64> {
        &self.design
    }

    pub fn observation(&self) -> &DVector<f64> {
        &self.observation
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `AᵀA`.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    // ½‖Ax − y‖² = ½xᵀGx − bᵀx + ½yᵀy with G = AᵀA, b = Aᵀy.
    fn smooth_parts(&self, x: &DVector<f64>) -> (f64, DVector<f64>) {
        let gx = &self.gram * x;
        let value = -0.5 * x.dot(&gx) + self.design_t_obs.dot(x) - 0.5 * self.obs_sq;
        (value, &self.design_t_obs - gx)
    }
}

/// Builds the Lasso posterior. `A` must be square; a rank-deficient `A`
/// leaves the target log-concave but not strongly so.
pub fn make_bayesian_lasso(design: DMatrix<f64>, observation: DVector<f64>, lambda: f64) -> Result<LassoModel> {
    let d = design.ncols();
    if design.nrows() != d || d == 0 {
        return Err(Error::invalid(format!(
            "design matrix must be square and nonempty, got {}x{}",
            design.nrows(),
            d
        )));
    }
    if observation.len() != d {
        return Err(Error::invalid(format!(
            "observation has length {}, design has {} rows",
            observation.len(),
            d
        )));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!("lambda must be finite and nonnegative, got {lambda}")));
    }
    if design.iter().chain(observation.iter()).any(|v| !v.is_finite()) {
        return Err(Error::invalid("design or observation has non-finite entries"));
    }

    let gram = design.transpose() * &design;
    let eig = SymmetricEigen::new(gram.clone()).eigenvalues;
    let largest = eig.max();
    let smallest = eig.min();
    let strong_concavity_m = if smallest > 1e-12 * largest.max(f64::MIN_POSITIVE) {
        Some(smallest)
    } else {
        warn!("design matrix is rank deficient (smallest eigenvalue of AᵀA = {smallest:.3e}); target is log-concave but not strongly");
        None
    };

    let design_t_obs = design.transpose() * &observation;
    let obs_sq = observation.norm_squared();
    Ok(LassoModel {
        regularity: Regularity {
            smoothness_m: largest,
            lipschitz_l: lambda * (d as f64).sqrt(),
            strong_concavity_m,
            f_concave: true,
        },
        design,
        observation,
        lambda,
        gram,
        design_t_obs,
        obs_sq,
    })
}

/// `A = Σ Vᵀ` with `Σ = diag(i^{−α})` and `V` Haar-distributed orthogonal.
///
/// `V` is the Q factor of a standard Gaussian matrix with the signs of
/// `diag(R)` absorbed, which makes it exactly Haar.
pub fn lasso_design_matrix(d: usize, alpha_decay: f64, seed: u64) -> DMatrix<f64> {
    assert!(d >= 1, "dimension must be positive");
    let mut rng = stream_rng(seed, 0);
    let gaussian = DMatrix::from_fn(d, d, |_, _| StandardNormal.sample(&mut rng));
    let qr = gaussian.qr();
    let r = qr.r();
    let mut v = qr.q();
    for (j, mut col) in v.column_iter_mut().enumerate() {
        if r[(j, j)] < 0.0 {
            col.neg_mut();
        }
    }
    let sigma = DVector::from_fn(d, |i, _| ((i + 1) as f64).powf(-alpha_decay));
    DMatrix::from_diagonal(&sigma) * v.transpose()
}

impl CompositePotential for LassoModel {
    fn name(&self) -> &str {
        "lasso"
    }

    fn dim(&self) -> usize {
        self.design.ncols()
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
    use crate::targets::drift_vector;
    use crate::targets::testing::{central_difference_grad, points_off_kinks};
    use rand::Rng;

    fn identity_lasso(d: usize, lambda: f64) -> LassoModel {
        make_bayesian_lasso(DMatrix::identity(d, d), DVector::zeros(d), lambda).unwrap()
    }

    fn reference_lasso(lambda: f64, seed: u64) -> LassoModel {
        make_bayesian_lasso(lasso_design_matrix(10, 0.5, seed), DVector::zeros(10), lambda).unwrap()
    }

    #[test]
    fn drift_at_origin_is_zero() {
        let pot = identity_lasso(2, 1.0);
        assert_eq!(drift_vector(&pot, &DVector::zeros(2)).unwrap(), DVector::zeros(2));
    }

    #[test]
    fn drift_hand_evaluation() {
        let pot = identity_lasso(2, 1.0);
        let v = drift_vector(&pot, &DVector::from_vec(vec![2.0, -3.0])).unwrap();
        assert_eq!(v.as_slice(), &[-3.0, 4.0]);
    }

    #[test]
    fn drift_rejects_non_finite() {
        let pot = identity_lasso(2, 1.0);
        let err = drift_vector(&pot, &DVector::from_vec(vec![f64::NAN, 0.0])).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn log_density_hand_evaluation() {
        let pot = identity_lasso(2, 1.0);
        let x = DVector::from_vec(vec![1.0, 1.0]);
        assert!((pot.log_density(&x) + 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_lambda_is_pure_gaussian() {
        let pot = identity_lasso(3, 0.0);
        assert_eq!(pot.regularity().lipschitz_l, 0.0);
        let x = DVector::from_vec(vec![0.5, -1.0, 0.0]);
        assert_eq!(pot.nonsmooth_value(&x), 0.0);
        assert_eq!(pot.nonsmooth_subgrad(&x), DVector::zeros(3));
    }

    #[test]
    fn non_square_design_is_rejected() {
        let err = make_bayesian_lasso(DMatrix::zeros(2, 3), DVector::zeros(2), 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn rank_deficient_design_drops_strong_concavity() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let pot = make_bayesian_lasso(a, DVector::zeros(2), 1.0).unwrap();
        assert_eq!(pot.regularity().strong_concavity_m, None);
        assert!(pot.regularity().f_concave);
    }

    #[test]
    fn one_dimensional_design_is_sign() {
        for seed in 0..10 {
            let a = lasso_design_matrix(1, 0.5, seed);
            assert!((a[(0, 0)].abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn design_gram_spectrum_matches_decay() {
        for seed in [1, 2, 3] {
            let a = lasso_design_matrix(10, 0.5, seed);
            let mut eig: Vec<f64> = SymmetricEigen::new(a.transpose() * &a).eigenvalues.iter().copied().collect();
            eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (i, e) in eig.iter().enumerate() {
                let expected = ((i + 1) as f64).powf(-1.0);
                assert!((e - expected).abs() < 1e-12, "eigenvalue {i}: {e} vs {expected}");
            }
        }
    }

    #[test]
    fn design_is_deterministic_per_seed() {
        assert_eq!(lasso_design_matrix(5, 0.3, 9), lasso_design_matrix(5, 0.3, 9));
        assert_ne!(lasso_design_matrix(5, 0.3, 9), lasso_design_matrix(5, 0.3, 10));
    }

    #[test]
    fn design_rows_scaled_orthogonal() {
        // A Aᵀ = Σ²
        let a = lasso_design_matrix(6, 0.5, 4);
        let aat = &a * a.transpose();
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i == j { 1.0 / (i + 1) as f64 } else { 0.0 };
                assert!((aat[(i, j)] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reference_instance_metadata() {
        let pot = reference_lasso(1.0, 42);
        let reg = pot.regularity();
        assert!((reg.smoothness_m - 1.0).abs() < 1e-12);
        assert!((reg.strong_concavity_m.unwrap() - 0.1).abs() < 1e-12);
        assert!((reg.condition_number().unwrap() - 10.0).abs() < 1e-10);
        assert!((reg.lipschitz_l - 10f64.sqrt()).abs() < 1e-15);
        assert!(reg.f_concave);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let pot = make_bayesian_lasso(lasso_design_matrix(10, 0.5, 3), DVector::from_element(10, 0.3), 2.0).unwrap();
        for x in points_off_kinks(10, 50, 1.0, 1e-3, 17) {
            let fd = central_difference_grad(&pot, &x, 1e-5);
            let g = pot.smooth_grad(&x);
            assert!((&g - &fd).norm() <= 1e-6 * g.norm().max(1.0), "{g} vs {fd}");
        }
    }

    #[test]
    fn lipschitz_and_subgradient_invariants() {
        let pot = reference_lasso(1.5, 8);
        let reg = pot.regularity();
        let pts = points_off_kinks(10, 60, 2.0, 0.0, 23);
        for pair in pts.chunks(2) {
            let (x, y) = (&pair[0], &pair[1]);
            let dist = (x - y).norm();
            let dg = (pot.smooth_grad(x) - pot.smooth_grad(y)).norm();
            assert!(dg <= reg.smoothness_m * dist * (1.0 + 1e-12));
            let dv = (pot.nonsmooth_value(x) - pot.nonsmooth_value(y)).abs();
            assert!(dv <= reg.lipschitz_l * dist * (1.0 + 1e-12));
            assert!(pot.nonsmooth_subgrad(x).norm() <= reg.lipschitz_l * (1.0 + 1e-12));
            // concave g lies below its supporting hyperplane
            let lin = pot.nonsmooth_value(x) + pot.nonsmooth_subgrad(x).dot(&(y - x));
            assert!(pot.nonsmooth_value(y) <= lin + 1e-12);
            assert!((pot.log_density(x) - pot.smooth_value(x) - pot.nonsmooth_value(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn strong_log_concavity_spot_check() {
        let pot = reference_lasso(1.0, 5);
        let m = pot.regularity().strong_concavity_m.unwrap();
        let mut rng = stream_rng(99, 0);
        let pts = points_off_kinks(10, 200, 2.0, 0.0, 31);
        for pair in pts.chunks(2) {
            let (x, y) = (&pair[0], &pair[1]);
            let t: f64 = rng.random();
            let mid = x * t + y * (1.0 - t);
            let lhs = pot.log_density(&mid) - t * pot.log_density(x) - (1.0 - t) * pot.log_density(y);
            let rhs = 0.5 * m * t * (1.0 - t) * (x - y).norm_squared();
            assert!(lhs >= rhs - 1e-9, "{lhs} < {rhs}");
        }
    }

    #[test]
    fn value_and_drift_agree_with_parts() {
        let pot = reference_lasso(0.7, 2);
        let x = DVector::from_fn(10, |i, _| (i as f64) * 0.3 - 1.2);
        let (v, drift) = pot.value_and_drift(&x);
        assert!((v - pot.log_density(&x)).abs() < 1e-12);
        assert!((drift - drift_vector(&pot, &x).unwrap()).norm() < 1e-12);
    }
}

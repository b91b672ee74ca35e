use nalgebra::DVector;

/// `−λ‖x‖₁`.
pub fn l1_value(x: &DVector<f64>, lambda: f64) -> f64 {
    -lambda * x.lp_norm(1)
}

/// Minimal-norm element of `∂(−λ‖·‖₁)(x)`: `−λ·sign(xᵢ)`, zero where `xᵢ = 0`.
pub fn l1_min_norm_subgrad(x: &DVector<f64>, lambda: f64) -> DVector<f64> {
    x.map(|v| {
        if v > 0.0 {
            -lambda
        } else if v < 0.0 {
            lambda
        } else {
            0.0
        }
    })
}

/// Soft thresholding at level `λ·step`.
pub fn l1_prox(x: &DVector<f64>, lambda: f64, step: f64) -> DVector<f64> {
    let t = lambda * step;
    x.map(|v| v.signum() * (v.abs() - t).max(0.0))
}

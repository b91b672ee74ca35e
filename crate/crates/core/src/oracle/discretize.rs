use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::samplers::{KernelSpec, PointState};
use crate::targets::CompositePotential;

/// Largest admissible stationary-weighted proposal mass lost off the grid.
pub const MAX_LEAK: f64 = 1e-6;
const UNIT_EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct DiscretizedKernel {
    /// Cell centres, ascending.
    pub grid: Vec<f64>,
    pub cell_width: f64,
    /// Row-stochastic transition matrix.
    pub transition: DMatrix<f64>,
    /// Discretized target, normalized.
    pub stationary: DVector<f64>,
    log_stationary: DVector<f64>,
}

impl DiscretizedKernel {
    /// Wraps an explicit reversible chain, checking row sums and detailed
    /// balance.
    pub fn from_parts(grid: Vec<f64>, cell_width: f64, transition: DMatrix<f64>, stationary: DVector<f64>) -> Result<Self> {
        let n = grid.len();
        if transition.shape() != (n, n) || stationary.len() != n {
            return Err(Error::invalid("grid, transition and stationary sizes disagree"));
        }
        if stationary.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::invalid("stationary weights must be positive"));
        }
        let total = stationary.sum();
        let stationary = stationary / total;
        let dk = Self {
            log_stationary: stationary.map(f64::ln),
            grid,
            cell_width,
            transition,
            stationary,
        };
        if dk.max_row_sum_error() > 1e-10 {
            return Err(Error::invalid("transition rows must sum to 1"));
        }
        if dk.detailed_balance_residual() > 1e-8 {
            return Err(Error::invalid("transition is not reversible with respect to the stationary vector"));
        }
        Ok(dk)
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn max_row_sum_error(&self) -> f64 {
        self.transition
            .row_iter()
            .map(|r| (r.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `max_{i,j} |πᵢ Pᵢⱼ − πⱼ Pⱼᵢ|`.
    pub fn detailed_balance_residual(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let flow = self.stationary[i] * self.transition[(i, j)] - self.stationary[j] * self.transition[(j, i)];
                worst = worst.max(flow.abs());
            }
        }
        worst
    }

    /// `D^{1/2} P D^{−1/2}`, symmetrized against rounding.
    pub fn symmetrized(&self) -> DMatrix<f64> {
        let n = self.len();
        let ls = &self.log_stationary;
        let mut s = DMatrix::from_fn(n, n, |i, j| self.transition[(i, j)] * (0.5 * (ls[i] - ls[j])).exp());
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (s[(i, j)] + s[(j, i)]);
                s[(i, j)] = avg;
                s[(j, i)] = avg;
            }
        }
        s
    }

    /// Eigenvalues of the symmetrized kernel, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut eig: Vec<f64> = SymmetricEigen::new(self.symmetrized()).eigenvalues.iter().copied().collect();
        eig.sort_by(|a, b| b.total_cmp(a));
        eig
    }
}

/// Discretizes a one-dimensional kernel on `n` cells over `[−R, R]`.
pub fn discretize_kernel(pot: &dyn CompositePotential, spec: &KernelSpec, n: usize, radius: f64) -> Result<DiscretizedKernel> {
    if pot.dim() != 1 {
        return Err(Error::invalid(format!("oracle supports d = 1 only, target has d = {}", pot.dim())));
    }
    if n < 50 {
        return Err(Error::invalid(format!("need at least 50 grid cells, got {n}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive, got {radius}")));
    }
    let kernel = spec.build();
    let width = 2.0 * radius / n as f64;
    let grid: Vec<f64> = (0..n).map(|i| -radius + (i as f64 + 0.5) * width).collect();
    let states: Vec<PointState> = grid
        .iter()
        .map(|&x| PointState::evaluate(pot, DVector::from_element(1, x), kernel.needs_drift()))
        .collect();
    let log_w = width.ln();

    // log[π(xᵢ) Q(xᵢ, xⱼ)]
    let flux = DMatrix::from_fn(n, n, |i, j| states[i].log_density + kernel.log_proposal_density(&states[i], &states[j].x));

    let mut transition = DMatrix::zeros(n, n);
    let mut row_mass = vec![0.0; n];
    for i in 0..n {
        let lp_i = states[i].log_density;
        let mut off = 0.0;
        for j in 0..n {
            row_mass[i] += (flux[(i, j)] - lp_i + log_w).exp();
            if i != j {
                let t = (flux[(i, j)].min(flux[(j, i)]) - lp_i + log_w).exp();
                transition[(i, j)] = t;
                off += t;
            }
        }
        transition[(i, i)] = 1.0 - off;
    }

    let max_lp = states.iter().map(|s| s.log_density).fold(f64::NEG_INFINITY, f64::max);
    let unnorm = DVector::from_iterator(n, states.iter().map(|s| (s.log_density - max_lp).exp()));
    let total = unnorm.sum();
    let stationary = unnorm / total;
    let log_stationary = DVector::from_iterator(n, states.iter().map(|s| s.log_density - max_lp - total.ln()));

    let leak: f64 = stationary.iter().zip(&row_mass).map(|(p, m)| p * (1.0 - m).abs()).sum();
    if leak > MAX_LEAK {
        return Err(Error::InsufficientDomain { leak });
    }
    if transition.diagonal().iter().any(|&t| t < -1e-12) {
        return Err(Error::InsufficientDomain { leak });
    }

    Ok(DiscretizedKernel {
        grid,
        cell_width: width,
        transition,
        stationary,
        log_stationary,
    })
}

/// `1 − λ₂` where `λ₂` is the largest eigenvalue below the unit eigenvalue.
pub fn exact_gap(dk: &DiscretizedKernel) -> Result<f64> {
    let eig = dk.spectrum();
    let units = eig.iter().filter(|&&l| l >= 1.0 - UNIT_EIGEN_TOL).count();
    if units != 1 || eig.len() < 2 {
        return Err(Error::Reducible { count: units });
    }
    Ok(1.0 - eig[1])
}

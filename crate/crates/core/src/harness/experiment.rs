use std::sync::Arc;

use log::{info, warn};
use nalgebra::DVector;
use rayon::prelude::*;

use super::config::{ExperimentConfig, HGrid};
use crate::diagnostics::{estimate_gap, TestFunctionSuite};
use crate::error::{Error, Result};
use crate::rng::mix_seed;
use crate::samplers::{run_chain_stream, KernelKind, KernelSpec};
use crate::targets::{find_mode, CompositePotential, ModelKind, Regularity, TargetRegistry};
use crate::theory::{mala_gap_bound, mala_max_step, rwm_gap_bound, rwm_max_step, rwm_rejection_bound, Regime};
use crate::theory::constants::MALA_ACCEPTANCE_FLOOR;

/// Overrides the configured worker count.
pub const WORKERS_ENV: &str = "NSGAP_WORKERS";

const DATA_SALT: u64 = 0xDA7A;
const CHAIN_STREAM: u64 = 1;
const MODE_ITERATIONS: usize = 200;

/// One (h, λ) cell of a sweep, aggregated over trials.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub model: ModelKind,
    pub kernel: KernelKind,
    pub h: f64,
    pub lambda: f64,
    /// Trials that produced a gap estimate.
    pub trial_count: usize,
    /// Trials lost to divergence or a degenerate chain.
    pub failures: usize,
    pub mean_gap: f64,
    pub stderr_gap: f64,
    pub mean_acceptance: f64,
    pub stderr_acceptance: f64,
    /// Closed-form gap lower bound, when `h ≤ h_max` and the target
    /// satisfies its assumptions.
    pub theory_lower_bound: Option<f64>,
    /// Certified acceptance floor at this cell, when one applies.
    pub theory_acceptance_floor: Option<f64>,
    pub h_max: f64,
}

impl ExperimentRow {
    pub fn admissible(&self) -> bool {
        self.h <= self.h_max
    }
}

/// Step ceiling of `kernel` for a target with the given constants.
///
/// MALA's ceiling needs a strong-concavity constant; targets without one
/// (logistic) fall back to `m = M`, which gives the largest ceiling the
/// formula can produce.
pub fn step_ceiling(kernel: KernelKind, d: usize, reg: &Regularity) -> f64 {
    match kernel {
        KernelKind::Rwm => rwm_max_step(d, reg.smoothness_m, reg.lipschitz_l),
        KernelKind::Mala => {
            let m = reg.strong_concavity_m.unwrap_or(reg.smoothness_m);
            mala_max_step(d, reg.smoothness_m, m, reg.lipschitz_l).unwrap_or(f64::INFINITY)
        }
    }
}

fn theory_bounds(kernel: KernelKind, d: usize, reg: &Regularity, h: f64) -> (Option<f64>, Option<f64>) {
    match kernel {
        KernelKind::Rwm => {
            let gap = reg.strong_concavity_m.and_then(|m| {
                rwm_gap_bound(d, reg.smoothness_m, reg.lipschitz_l, Regime::Convex { m }, h)
                    .ok()
                    .map(|r| r.gap_lower)
            });
            let floor = (h <= rwm_max_step(d, reg.smoothness_m, reg.lipschitz_l))
                .then(|| 1.0 - rwm_rejection_bound(d, reg.smoothness_m, reg.lipschitz_l, h));
            (gap, floor)
        }
        KernelKind::Mala => match mala_gap_bound(d, reg, h) {
            Ok(r) => (Some(r.gap_lower), Some(MALA_ACCEPTANCE_FLOOR)),
            Err(_) => (None, None),
        },
    }
}

/// The step grid of `cfg`; automatic grids are centred on the ceiling at
/// the reference λ.
pub fn resolve_h_grid(cfg: &ExperimentConfig, registry: &TargetRegistry) -> Result<Vec<f64>> {
    match &cfg.h_grid {
        HGrid::Explicit(v) => Ok(v.clone()),
        HGrid::Auto { reference_lambda, .. } => {
            let mut params = cfg.params.clone();
            params.lambda = *reference_lambda;
            params.data_seed = data_seed(cfg);
            let pot = registry.build(cfg.model.as_str(), &params)?;
            let h_max = step_ceiling(cfg.kernel, pot.dim(), &pot.regularity());
            if !h_max.is_finite() {
                return Err(Error::config(
                    "h_grid",
                    "automatic grid needs a finite step ceiling; give an explicit h_grid",
                ));
            }
            Ok(cfg.h_grid.resolve(h_max))
        }
    }
}

fn data_seed(cfg: &ExperimentConfig) -> u64 {
    mix_seed(cfg.master_seed ^ cfg.params.data_seed, DATA_SALT)
}

/// Seed of trial `t`. Independent of the cell so that all (h, λ) cells share
/// random numbers trial by trial.
pub fn trial_seed(master_seed: u64, trial: usize) -> u64 {
    mix_seed(master_seed, trial as u64)
}

fn worker_count(cfg: &ExperimentConfig) -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(cfg.workers)
}

struct TrialOutcome {
    gap: f64,
    acceptance: f64,
}

fn run_trial(
    pot: &dyn CompositePotential,
    spec: &KernelSpec,
    x0: &DVector<f64>,
    suite: &TestFunctionSuite,
    cfg: &ExperimentConfig,
    trial: usize,
) -> Result<TrialOutcome> {
    let seed = trial_seed(cfg.master_seed, trial);
    let chain = run_chain_stream(pot, spec, x0, cfg.chain_length, cfg.burn_in, seed, CHAIN_STREAM)?;
    let est = estimate_gap(&chain, suite)?;
    Ok(TrialOutcome {
        gap: est.gap_estimate,
        acceptance: chain.acceptance_rate(),
    })
}

fn mean_and_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs the sweep with the built-in targets. See [`run_experiment_with`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    run_experiment_with(cfg, &TargetRegistry::builtin(), |_| {})
}

/// Runs `n_trials` chains in every (h, λ) cell and aggregates gap estimates
/// and acceptance rates.
///
/// Cells are visited in (λ, h) order and `on_row` sees each row as soon as
/// its cell finishes, so incremental output is already sorted. Trials run in
/// parallel on `workers` threads (`NSGAP_WORKERS` wins). Chains start at the
/// target's mode. A trial that diverges or yields only constant series
/// counts as a failure of its cell; it does not abort the sweep.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    registry: &TargetRegistry,
    mut on_row: impl FnMut(&ExperimentRow),
) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    let mut h_grid = resolve_h_grid(cfg, registry)?;
    h_grid.sort_by(f64::total_cmp);
    let mut lambdas = cfg.lambda_grid.clone();
    lambdas.sort_by(f64::total_cmp);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(cfg))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;

    let d = cfg.params.d;
    let suites: Vec<TestFunctionSuite> = if cfg.shared_probe {
        vec![TestFunctionSuite::from_seed(d, cfg.master_seed)]
    } else {
        (0..cfg.n_trials)
            .map(|t| TestFunctionSuite::from_seed(d, trial_seed(cfg.master_seed, t)))
            .collect()
    };

    let mut rows = Vec::with_capacity(h_grid.len() * lambdas.len());
    for &lambda in &lambdas {
        let mut params = cfg.params.clone();
        params.lambda = lambda;
        params.data_seed = data_seed(cfg);
        let pot: Arc<dyn CompositePotential> = registry.build(cfg.model.as_str(), &params)?;
        let reg = pot.regularity();
        let h_max = step_ceiling(cfg.kernel, pot.dim(), &reg);
        let x0 = find_mode(pot.as_ref(), &DVector::zeros(pot.dim()), MODE_ITERATIONS);

        for &h in &h_grid {
            let spec = KernelSpec::new(cfg.kernel, h)?;
            let outcomes: Vec<Result<TrialOutcome>> = pool.install(|| {
                (0..cfg.n_trials)
                    .into_par_iter()
                    .map(|t| run_trial(pot.as_ref(), &spec, &x0, &suites[t % suites.len()], cfg, t))
                    .collect()
            });
            let mut gaps = Vec::new();
            let mut accs = Vec::new();
            let mut failures = 0;
            for (t, outcome) in outcomes.into_iter().enumerate() {
                match outcome {
                    Ok(o) => {
                        gaps.push(o.gap);
                        accs.push(o.acceptance);
                    }
                    Err(e @ (Error::DivergedChain { .. } | Error::DegenerateSeries(_))) => {
                        warn!("λ = {lambda}, h = {h:e}, trial {t}: {e}");
                        failures += 1;
                    }
                    Err(e) => return Err(e),
                }
            }
            let (mean_gap, stderr_gap) = mean_and_stderr(&gaps);
            let (mean_acceptance, stderr_acceptance) = mean_and_stderr(&accs);
            let (theory_lower_bound, theory_acceptance_floor) = theory_bounds(cfg.kernel, pot.dim(), &reg, h);
            let row = ExperimentRow {
                model: cfg.model,
                kernel: cfg.kernel,
                h,
                lambda,
                trial_count: gaps.len(),
                failures,
                mean_gap,
                stderr_gap,
                mean_acceptance,
                stderr_acceptance,
                theory_lower_bound,
                theory_acceptance_floor,
                h_max,
            };
            info!(
                "{} {} λ={lambda} h={h:.3e}: gap {:.3e} ± {:.1e}, acceptance {:.4}",
                cfg.model, cfg.kernel, row.mean_gap, row.stderr_gap, row.mean_acceptance
            );
            on_row(&row);
            rows.push(row);
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// Sorts by (λ, h, kernel).
pub fn sort_rows(rows: &mut [ExperimentRow]) {
    rows.sort_by(|a, b| {
        a.lambda
            .total_cmp(&b.lambda)
            .then(a.h.total_cmp(&b.h))
            .then(a.kernel.cmp(&b.kernel))
    });
}

/// The `k` smallest admissible step sizes among `rows`.
pub fn smallest_admissible(rows: &[ExperimentRow], k: usize) -> Vec<f64> {
    let mut hs: Vec<f64> = rows.iter().filter(|r| r.admissible()).map(|r| r.h).collect();
    hs.sort_by(f64::total_cmp);
    hs.dedup();
    hs.truncate(k);
    hs
}

/// Least-squares slope of `log mean_gap` against `log h`.
///
/// With `h_subset`, only rows whose `h` matches one of the listed values
/// (to relative 10⁻⁹) take part. Rows with a nonpositive or non-finite gap
/// are skipped with a warning; fewer than three remaining rows, or a
/// single distinct `h`, is an error.
pub fn fit_scaling_exponent(rows: &[ExperimentRow], h_subset: Option<&[f64]>) -> Result<f64> {
    let in_subset = |h: f64| match h_subset {
        None => true,
        Some(hs) => hs.iter().any(|&s| (s - h).abs() <= 1e-9 * s.abs().max(h.abs())),
    };
    let mut pts = Vec::new();
    for r in rows.iter().filter(|r| in_subset(r.h)) {
        if r.mean_gap > 0.0 && r.mean_gap.is_finite() && r.h > 0.0 {
            pts.push((r.h.ln(), r.mean_gap.ln()));
        } else {
            warn!("scaling fit: row at h = {:e}, λ = {} has gap {}; excluded", r.h, r.lambda, r.mean_gap);
        }
    }
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "scaling fit needs at least 3 rows with positive gap, have {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 1e-24 {
        return Err(Error::InsufficientData("scaling fit needs at least two distinct step sizes".into()));
    }
    Ok(sxy / sxx)
}

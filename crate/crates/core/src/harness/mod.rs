//! Config-driven sweeps over (h, λ), their CSV output and the `nsgap` CLI.

pub mod cli;
mod config;
mod experiment;
mod figures;
mod output;

pub use config::{ExperimentConfig, HGrid};
pub use experiment::{
    fit_scaling_exponent, resolve_h_grid, run_experiment, run_experiment_with, smallest_admissible, sort_rows,
    step_ceiling, trial_seed, ExperimentRow, WORKERS_ENV,
};
pub use figures::{Figure, Scale};
pub use output::{write_rows, RowWriter, ACCEPTANCE_HEADER, GAP_HEADER};

/// Full double precision, 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

//! # nsgap
//!
//! Metropolis samplers for non-smooth composite log-concave targets
//! `log π = f + g` (smooth `f`, Lipschitz `g`), together with the machinery
//! to measure how fast they mix:
//!
//! - [`targets`]: composite potentials (Bayesian Lasso, logistic regression
//!   with a Laplace prior, Gaussians) and the generators for their data.
//! - [`samplers`]: random-walk Metropolis and subgradient MALA kernels,
//!   registered by name, plus the seeded chain runner.
//! - [`diagnostics`]: autocorrelation, IACT (Geyer initial positive
//!   sequence) and the max-IACT spectral-gap estimator.
//! - [`theory`]: closed-form step-size ceilings, gap lower bounds,
//!   isoperimetric profiles, rejection and acceptance bounds.
//! - [`oracle`]: exact gaps of one-dimensional kernels by grid
//!   discretization and symmetric eigen-decomposition.
//! - [`harness`]: config-driven sweeps, CSV output, and the `nsgap` CLI.
//!
//! ```
//! use nalgebra::DVector;
//! use nsgap::samplers::{run_chain, KernelKind, KernelSpec};
//! use nsgap::targets::Gaussian;
//!
//! let target = Gaussian::standard(1);
//! let spec = KernelSpec::new(KernelKind::Rwm, 0.5).unwrap();
//! let chain = run_chain(&target, &spec, &DVector::zeros(1), 1_000, 100, 7).unwrap();
//! assert_eq!(chain.samples.len(), 1_000);
//! ```

pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod rng;
pub mod samplers;
pub mod targets;
pub mod theory;

pub use error::{Error, Result};

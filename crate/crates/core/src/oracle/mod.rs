//! Exact spectral gaps of one-dimensional Metropolis kernels.
//!
//! The kernel is discretized on a uniform midpoint grid over `[−R, R]`:
//! off-diagonal entries are `α(xᵢ, xⱼ)·Q(xᵢ, xⱼ)·w`, the diagonal absorbs
//! the rejected and off-grid mass. The chain is reversible with respect to
//! the discretized target, so `D^{1/2} P D^{−1/2}` is symmetric and its
//! spectrum gives the gap.

mod compare;
mod discretize;

pub use compare::{oracle_vs_estimate, ChainSettings, OracleComparison};
pub use discretize::{discretize_kernel, exact_gap, DiscretizedKernel};

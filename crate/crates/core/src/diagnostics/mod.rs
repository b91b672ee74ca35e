//! Spectral-gap estimation from a stationary chain.
//!
//! For a reversible chain `Gap = 2 / (1 + sup_f IACT(f))`; the supremum is
//! replaced by a maximum over a fixed [`TestFunctionSuite`].

mod acf;
mod gap;
mod iact;
mod suite;

pub use acf::autocorrelation;
pub use gap::{aggregate_trials, estimate_gap, estimate_gap_from_samples, IactEstimate, TrialSummary};
pub use iact::{iact, iact_detailed, IactDetail};
pub use suite::{TestFunction, TestFunctionSuite, PROBE_STREAM};

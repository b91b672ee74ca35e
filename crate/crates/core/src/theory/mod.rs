//! Closed-form bounds for the Metropolis kernels on composite targets:
//! step-size ceilings, isoperimetric profiles, spectral-gap lower bounds,
//! the RWM rejection bound and the MALA acceptance floor.

mod bounds;
pub mod constants;
mod profile;

pub use bounds::{
    cheeger_interval, gap_lower_bound_general, mala_acceptance_floor, mala_gap_bound, mala_max_step,
    rwm_gap_bound, rwm_max_step, rwm_rejection_bound, BoundReport, GeneralBound,
};
pub use profile::{ConvexProfile, IsoProfile, LsiProfile, PoincareProfile, Regime};

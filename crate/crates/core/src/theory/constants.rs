//! Universal constants of the gap bounds, kept as the exact expressions
//! they come from.

use std::f64::consts::{LN_2, PI};

/// `C` in `Gap ≥ C m h²` for RWM on strongly log-concave targets: `1/(2¹³π)`.
pub fn rwm_convex() -> f64 {
    1.0 / (8192.0 * PI)
}

/// `C₁` in the RWM log-Sobolev bound: `2⁻²⁰`.
pub fn rwm_lsi() -> f64 {
    (-20.0f64).exp2()
}

/// `C₂` in the RWM Poincaré bound: `(log 8)²·2⁻²³`.
pub fn rwm_poincare() -> f64 {
    let log8 = 3.0 * LN_2;
    log8 * log8 * (-23.0f64).exp2()
}

/// `C″` in `Gap ≥ C″ m h` for MALA: `1/(40000π)`.
pub fn mala_convex() -> f64 {
    1.0 / (40_000.0 * PI)
}

/// Certified lower bound on MALA's mean acceptance: `13/20`.
pub const MALA_ACCEPTANCE_FLOOR: f64 = 13.0 / 20.0;

/// Per-case rejection ceiling in the MALA acceptance analysis.
pub const MALA_REJECTION_CEILING: f64 = 0.35;

/// `sup_x r(x)` for RWM at its step-size ceiling.
pub const RWM_REJECTION_AT_CEILING: f64 = 5.0 / 8.0;

/// Close-coupling parameters.
pub const RWM_EPSILON: f64 = 0.25;
pub const MALA_EPSILON: f64 = 0.2;

pub fn rwm_delta(h: f64) -> f64 {
    h / 4.0
}

pub fn mala_delta(h: f64) -> f64 {
    (2.0 * h).sqrt() / 10.0
}

use crate::error::{Error, Result};
use crate::samplers::KernelKind;
use crate::targets::Regularity;

use super::constants;
use super::profile::{IsoProfile, Regime};

const T_FLOOR: f64 = 1e-8;
const T_GRID: usize = 2_000;

/// Grid evaluation of the isoperimetric gap bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralBound {
    /// `(ε²/8)·[sup_θ min{1−θ, Υ(δ)·inf_t F(θt)/(2t)}]²` over the grids.
    pub grid_sup: f64,
    /// `(ε²/8)·[min{½, Υ(δ)F(¼)}]²`, present when `F` is concave.
    pub simplified: Option<f64>,
}

/// Isoperimetric lower bound on the spectral gap from close coupling
/// `(ε, δ)` and a profile `(F, Υ)`.
///
/// The supremum runs over a uniform `θ` grid on `[0, 1]` (with `θ = ½`
/// always included) and the infimum over a log-spaced `t` grid on
/// `[10⁻⁸, ½]`.
pub fn gap_lower_bound_general(epsilon: f64, delta: f64, profile: &dyn IsoProfile, theta_grid_size: usize) -> GeneralBound {
    let prefactor = epsilon * epsilon / 8.0;
    let ups = profile.upsilon(delta);
    let ts: Vec<f64> = (0..T_GRID)
        .map(|i| {
            let frac = i as f64 / (T_GRID - 1) as f64;
            (T_FLOOR.ln() + frac * (0.5f64.ln() - T_FLOOR.ln())).exp()
        })
        .chain(std::iter::once(0.5))
        .collect();

    let n = theta_grid_size.max(2);
    let thetas = (0..n).map(|i| i as f64 / (n - 1) as f64).chain(std::iter::once(0.5));
    let best = thetas
        .map(|theta| {
            let inner = ts
                .iter()
                .map(|&t| profile.f(theta * t) / (2.0 * t))
                .fold(f64::INFINITY, f64::min);
            (1.0 - theta).min(ups * inner)
        })
        .fold(0.0, f64::max);

    let simplified = profile
        .f_is_concave()
        .then(|| prefactor * (0.5f64).min(ups * profile.f(0.25)).powi(2));
    GeneralBound {
        grid_sup: prefactor * best * best,
        simplified,
    }
}

fn rwm_terms(d: usize, smoothness: f64, lipschitz: f64) -> (f64, f64) {
    let sd = (d as f64).sqrt();
    let smooth = if smoothness > 0.0 {
        1.0 / (2.0 * smoothness.sqrt() * sd)
    } else {
        f64::INFINITY
    };
    let nonsmooth = if lipschitz > 0.0 {
        1.0 / (16.0 * lipschitz * sd)
    } else {
        f64::INFINITY
    };
    (smooth, nonsmooth)
}

/// RWM step-size ceiling `(1/√d)·min{1/(2√M), 1/(16L)}`. A zero constant
/// drops its term; with both zero the ceiling is `+∞`.
pub fn rwm_max_step(d: usize, smoothness: f64, lipschitz: f64) -> f64 {
    let (a, b) = rwm_terms(d.max(1), smoothness, lipschitz);
    a.min(b)
}

fn mala_terms(d: usize, smoothness: f64, concavity: f64, lipschitz: f64) -> (f64, f64) {
    let d = d as f64;
    let smooth = concavity / (200.0 * d * smoothness * smoothness);
    let nonsmooth = if lipschitz > 0.0 {
        1.0 / (200.0 * d * lipschitz * lipschitz)
    } else {
        f64::INFINITY
    };
    (smooth, nonsmooth)
}

/// MALA step-size ceiling `(1/200)·min{1/(dκM), 1/(dL²)}` with `κ = M/m`.
pub fn mala_max_step(d: usize, smoothness: f64, concavity: f64, lipschitz: f64) -> Result<f64> {
    if !(concavity > 0.0) {
        return Err(Error::invalid(format!(
            "MALA ceiling needs strong log-concavity m > 0, got {concavity}"
        )));
    }
    if smoothness < concavity {
        return Err(Error::invalid(format!("need M ≥ m, got M = {smoothness}, m = {concavity}")));
    }
    let (a, b) = mala_terms(d.max(1), smoothness, concavity, lipschitz);
    Ok(a.min(b))
}

/// A closed-form gap lower bound together with the coupling parameters
/// behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kernel: KernelKind,
    pub regime: &'static str,
    pub epsilon: f64,
    pub delta: f64,
    pub gap_lower: f64,
    pub h_max: f64,
    pub constants_used: Vec<(&'static str, f64)>,
}

/// Spectral-gap lower bound for RWM at step `h`:
/// `C·m·h²` (strongly log-concave), `C₁h⁴/(C_LSI² + h⁴)` (log-Sobolev) or
/// `C₂h⁴/(C_PI² + h⁴)` (Poincaré).
pub fn rwm_gap_bound(d: usize, smoothness: f64, lipschitz: f64, regime: Regime, h: f64) -> Result<BoundReport> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("step size must be positive, got {h}")));
    }
    let (smooth, nonsmooth) = rwm_terms(d.max(1), smoothness, lipschitz);
    let h_max = smooth.min(nonsmooth);
    if h > h_max {
        return Err(Error::ConstraintViolation {
            h,
            h_max,
            binding: if smooth <= nonsmooth { "1/(2√(dM))" } else { "1/(16L√d)" },
        });
    }
    let h4 = h.powi(4);
    let (gap_lower, constants_used) = match regime {
        Regime::Convex { m } => {
            let c = constants::rwm_convex();
            (c * m * h * h, vec![("C", c)])
        }
        Regime::Lsi { c_lsi } => {
            let c = constants::rwm_lsi();
            (c * h4 / (c_lsi * c_lsi + h4), vec![("C1", c)])
        }
        Regime::Poincare { c_pi } => {
            let c = constants::rwm_poincare();
            (c * h4 / (c_pi * c_pi + h4), vec![("C2", c)])
        }
    };
    Ok(BoundReport {
        kernel: KernelKind::Rwm,
        regime: regime.name(),
        epsilon: constants::RWM_EPSILON,
        delta: constants::rwm_delta(h),
        gap_lower,
        h_max,
        constants_used,
    })
}

/// Spectral-gap lower bound `C″·m·h` for MALA on an `m`-strongly
/// log-concave target with concave smooth part.
pub fn mala_gap_bound(d: usize, regularity: &Regularity, h: f64) -> Result<BoundReport> {
    let m = regularity.strong_concavity_m.ok_or_else(|| {
        Error::AssumptionViolation("MALA gap bound needs a strongly log-concave target".into())
    })?;
    if !regularity.f_concave {
        return Err(Error::AssumptionViolation("MALA gap bound needs a concave smooth part f".into()));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("step size must be positive, got {h}")));
    }
    let (smooth, nonsmooth) = mala_terms(d.max(1), regularity.smoothness_m, m, regularity.lipschitz_l);
    let h_max = mala_max_step(d, regularity.smoothness_m, m, regularity.lipschitz_l)?;
    if h > h_max {
        return Err(Error::ConstraintViolation {
            h,
            h_max,
            binding: if smooth <= nonsmooth { "1/(200dκM)" } else { "1/(200dL²)" },
        });
    }
    let c = constants::mala_convex();
    Ok(BoundReport {
        kernel: KernelKind::Mala,
        regime: "convex",
        epsilon: constants::MALA_EPSILON,
        delta: constants::mala_delta(h),
        gap_lower: c * m * h,
        h_max,
        constants_used: vec![("C''", c)],
    })
}

/// Upper bound `min{1, ½ + L·h·√d + ¼·M·h²·d}` on the RWM rejection
/// probability from any state.
pub fn rwm_rejection_bound(d: usize, smoothness: f64, lipschitz: f64, h: f64) -> f64 {
    let d = d as f64;
    (0.5 + lipschitz * h * d.sqrt() + 0.25 * smoothness * h * h * d).min(1.0)
}

/// Certified floor on MALA's mean acceptance below its step ceiling.
pub fn mala_acceptance_floor() -> f64 {
    constants::MALA_ACCEPTANCE_FLOOR
}

/// Cheeger's inequality `(κ/2)·φ² ≤ Gap ≤ φ` for conductance `φ`, with the
/// universal constant `κ` supplied by the caller.
pub fn cheeger_interval(phi: f64, kappa_universal: f64) -> (f64, f64) {
    (0.5 * kappa_universal * phi * phi, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{ConvexProfile, LsiProfile, PoincareProfile};
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn rwm_ceiling_examples() {
        assert!(rel(rwm_max_step(100, 4.0, 0.0), 0.025) < 1e-12);
        assert!(rel(rwm_max_step(10, 1.0, 1.0), 1.0 / (16.0 * 10f64.sqrt())) < 1e-12);
        assert!((rwm_max_step(10, 1.0, 1.0) - 0.019764).abs() < 1e-6);
        assert_eq!(rwm_max_step(3, 0.0, 0.0), f64::INFINITY);
        assert!(rel(rwm_max_step(4, 0.0, 2.0), 1.0 / 64.0) < 1e-12);
    }

    #[test]
    fn rwm_ceiling_monotone() {
        let base = rwm_max_step(10, 1.0, 1.0);
        assert!(rwm_max_step(11, 1.0, 1.0) <= base);
        assert!(rwm_max_step(10, 300.0, 1.0) <= base);
        assert!(rwm_max_step(10, 1.0, 1.1) <= base);
    }

    #[test]
    fn mala_ceiling_examples() {
        assert!(rel(mala_max_step(10, 1.0, 1.0, 0.0).unwrap(), 5e-4) < 1e-12);
        assert!(rel(mala_max_step(10, 1.0, 0.1, 1.0).unwrap(), 5e-5) < 1e-12);
        assert!(matches!(mala_max_step(10, 1.0, 0.0, 1.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn mala_ceiling_monotone() {
        let base = mala_max_step(10, 2.0, 0.5, 1.0).unwrap();
        assert!(mala_max_step(12, 2.0, 0.5, 1.0).unwrap() <= base);
        assert!(mala_max_step(10, 2.5, 0.5, 1.0).unwrap() <= base);
        assert!(mala_max_step(10, 2.0, 0.5, 1.5).unwrap() <= base);
        assert!(mala_max_step(10, 2.0, 0.6, 1.0).unwrap() >= base);
    }

    #[test]
    fn rwm_convex_bound_value() {
        let r = rwm_gap_bound(1, 1.0, 0.0, Regime::Convex { m: 1.0 }, 0.01).unwrap();
        assert!(rel(r.gap_lower, 1e-4 / (8192.0 * PI)) < 1e-12);
        assert!((r.gap_lower - 3.8856e-9).abs() < 1e-13);
        assert_eq!((r.epsilon, r.delta), (0.25, 0.0025));
    }

    #[test]
    fn rwm_bound_rejects_large_steps() {
        match rwm_gap_bound(10, 1.0, 1.0, Regime::Convex { m: 0.1 }, 0.05) {
            Err(Error::ConstraintViolation { binding, .. }) => assert_eq!(binding, "1/(16L√d)"),
            other => panic!("{other:?}"),
        }
        match rwm_gap_bound(10, 100.0, 0.001, Regime::Convex { m: 0.1 }, 0.05) {
            Err(Error::ConstraintViolation { binding, .. }) => assert_eq!(binding, "1/(2√(dM))"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lsi_and_poincare_limits() {
        let h = 0.01;
        let big = rwm_gap_bound(1, 1.0, 0.0, Regime::Lsi { c_lsi: 1e12 }, h).unwrap().gap_lower;
        let small = rwm_gap_bound(1, 1.0, 0.0, Regime::Lsi { c_lsi: 1e-12 }, h).unwrap().gap_lower;
        assert!(big < 1e-20);
        assert!(rel(small, constants::rwm_lsi()) < 1e-9);
        let p = rwm_gap_bound(1, 1.0, 0.0, Regime::Poincare { c_pi: 1e-12 }, h).unwrap();
        assert!(rel(p.gap_lower, constants::rwm_poincare()) < 1e-9);
        assert_eq!(p.constants_used[0].0, "C2");
    }

    #[test]
    fn lsi_closed_form_relaxes_general_form() {
        for &c in &[0.5, 2.0, 10.0] {
            for &h in &[1e-3, 1e-2, 0.1] {
                let lsi = rwm_gap_bound(1, 1.0, 0.0, Regime::Lsi { c_lsi: c }, h).unwrap().gap_lower;
                let g = gap_lower_bound_general(0.25, h / 4.0, &LsiProfile { c_lsi: c }, 101);
                assert!(lsi <= g.simplified.unwrap() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn poincare_closed_form_exceeds_general_form_for_small_h() {
        // The closed-form C₂ = (log 8)²·2⁻²³ is larger than what the
        // isoperimetric expression delivers as h → 0; the ratio tends to
        // 16·(log 8)² (F(¼) = ¼ for this profile).
        let c = 1.0;
        let h = 1e-4;
        let closed = rwm_gap_bound(1, 1.0, 0.0, Regime::Poincare { c_pi: c }, h).unwrap().gap_lower;
        let general = gap_lower_bound_general(0.25, h / 4.0, &PoincareProfile { c_pi: c }, 101)
            .simplified
            .unwrap();
        let ratio = closed / general;
        assert!(rel(ratio, 16.0 * 8f64.ln().powi(2)) < 1e-6, "{ratio}");
    }

    #[test]
    fn mala_bound_value_and_linearity() {
        let reg = Regularity {
            smoothness_m: 1.0,
            lipschitz_l: 0.0,
            strong_concavity_m: Some(1.0),
            f_concave: true,
        };
        let r = mala_gap_bound(1, &reg, 1e-4).unwrap();
        assert!(rel(r.gap_lower, 1e-4 / (40_000.0 * PI)) < 1e-12);
        assert!((r.gap_lower - 7.9577e-10).abs() < 1e-14);
        assert_eq!(r.epsilon, 0.2);
        assert!(rel(r.delta, (2e-4f64).sqrt() / 10.0) < 1e-15);
        let r2 = mala_gap_bound(1, &reg, 2e-4).unwrap();
        assert!(rel(r2.gap_lower, 2.0 * r.gap_lower) < 1e-12);
        let reg_half = Regularity {
            strong_concavity_m: Some(0.5),
            ..reg
        };
        let r3 = mala_gap_bound(1, &reg_half, 1e-4).unwrap();
        assert!(rel(r3.gap_lower, 0.5 * r.gap_lower) < 1e-12);
    }

    #[test]
    fn mala_bound_assumptions() {
        let reg = Regularity {
            smoothness_m: 1.0,
            lipschitz_l: 0.0,
            strong_concavity_m: None,
            f_concave: true,
        };
        assert!(matches!(mala_gap_bound(1, &reg, 1e-4), Err(Error::AssumptionViolation(_))));
        let reg = Regularity {
            strong_concavity_m: Some(1.0),
            f_concave: false,
            ..reg
        };
        assert!(matches!(mala_gap_bound(1, &reg, 1e-4), Err(Error::AssumptionViolation(_))));
        let reg = Regularity { f_concave: true, ..reg };
        assert!(matches!(mala_gap_bound(1, &reg, 1.0), Err(Error::ConstraintViolation { .. })));
    }

    #[test]
    fn rejection_bound_examples() {
        assert_eq!(rwm_rejection_bound(7, 0.0, 0.0, 3.0), 0.5);
        let v = rwm_rejection_bound(10, 1.0, 1.0, 0.01);
        let expected = 0.5 + 0.01 * 10f64.sqrt() + 0.25 * 1e-4 * 10.0;
        assert!(rel(v, expected) < 1e-12);
        assert!((v - 0.53188).abs() < 1e-5);
        assert_eq!(rwm_rejection_bound(10, 1.0, 1.0, 10.0), 1.0);
    }

    #[test]
    fn rejection_at_ceiling() {
        for &(d, m, l) in &[(1, 1.0, 1.0), (10, 1.0, 3.16), (50, 7.0, 0.01), (3, 0.5, 0.0), (20, 0.0, 2.0)] {
            let h = rwm_max_step(d, m, l);
            assert!(rwm_rejection_bound(d, m, l, h) <= 0.625 + 1e-15);
        }
    }

    #[test]
    fn cheeger_examples() {
        assert_eq!(cheeger_interval(1.0, 1.0), (0.5, 1.0));
        let (lo, hi) = cheeger_interval(0.1, 1.0);
        assert!(rel(lo, 0.005) < 1e-12);
        assert_eq!(hi, 0.1);
        for &phi in &[0.01, 0.3, 0.9] {
            let (lo, hi) = cheeger_interval(phi, 2.0);
            assert!(lo <= hi);
        }
    }

    #[test]
    fn convex_simplified_matches_closed_form() {
        // (1/2⁷)·min{1/4, m h²/(2⁶π)} with ε = ¼, δ = h/4.
        let m = 1.0;
        for &h in &[0.01, 0.1, 0.5] {
            let g = gap_lower_bound_general(0.25, h / 4.0, &ConvexProfile { m }, 51);
            let expected = (0.25f64).min(m * h * h / (64.0 * PI)) / 128.0;
            assert!(rel(g.simplified.unwrap(), expected) < 1e-12);
            assert!(g.grid_sup >= g.simplified.unwrap() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn bounds_vanish_as_h_shrinks() {
        let reg = Regularity {
            smoothness_m: 1.0,
            lipschitz_l: 1.0,
            strong_concavity_m: Some(0.5),
            f_concave: true,
        };
        let mut prev = f64::INFINITY;
        for k in 3..12 {
            let h = 10f64.powi(-k);
            let r = rwm_gap_bound(2, 1.0, 1.0, Regime::Convex { m: 0.5 }, h).unwrap().gap_lower;
            let l = rwm_gap_bound(2, 1.0, 1.0, Regime::Lsi { c_lsi: 1.0 }, h).unwrap().gap_lower;
            let p = mala_gap_bound(2, &reg, h).unwrap().gap_lower;
            assert!(r >= 0.0 && l >= 0.0 && p >= 0.0);
            assert!(r < prev);
            prev = r;
        }
        assert!(prev < 1e-25);
    }
}

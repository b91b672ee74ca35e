use std::f64::consts::{E, LN_2, PI};
use std::fmt;

use crate::error::{Error, Result};

/// The functions `F` and `Υ` of a (generalized) three-set isoperimetric
/// inequality `π(S₃) ≥ Υ(d(S₁, S₂))·F(min{π(S₁), π(S₂)})`.
pub trait IsoProfile: Send + Sync {
    fn name(&self) -> &'static str;

    /// `F` on `(0, ½]`; `F(0) = 0`.
    fn f(&self, t: f64) -> f64;

    fn upsilon(&self, delta: f64) -> f64;

    /// Whether `F` is concave on `(0, ½]`.
    fn f_is_concave(&self) -> bool;
}

/// `m`-strongly log-concave: `F(t) = t·√(2m·log(1/t)/(π·log 2))`, `Υ = id`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexProfile {
    pub m: f64,
}

impl IsoProfile for ConvexProfile {
    fn name(&self) -> &'static str {
        "convex"
    }

    fn f(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        t * (2.0 * self.m * (1.0 / t).ln() / (PI * LN_2)).sqrt()
    }

    fn upsilon(&self, delta: f64) -> f64 {
        delta
    }

    fn f_is_concave(&self) -> bool {
        true
    }
}

/// Log-Sobolev with constant `C_LSI`:
/// `F(t) = (t/2)·log(2/t)`, `Υ(δ) = δ²/(C_LSI + (1 + e⁻¹)δ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsiProfile {
    pub c_lsi: f64,
}

impl IsoProfile for LsiProfile {
    fn name(&self) -> &'static str {
        "lsi"
    }

    fn f(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        0.5 * t * (2.0 / t).ln()
    }

    fn upsilon(&self, delta: f64) -> f64 {
        let d2 = delta * delta;
        d2 / (self.c_lsi + (1.0 + 1.0 / E) * d2)
    }

    // F'' = −1/(2t) < 0
    fn f_is_concave(&self) -> bool {
        true
    }
}

/// Poincaré with constant `C_PI`: `F(t) = t`, `Υ(δ) = δ²/(16(C_PI + 4δ²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareProfile {
    pub c_pi: f64,
}

impl IsoProfile for PoincareProfile {
    fn name(&self) -> &'static str {
        "poincare"
    }

    fn f(&self, t: f64) -> f64 {
        t.max(0.0)
    }

    fn upsilon(&self, delta: f64) -> f64 {
        let d2 = delta * delta;
        d2 / (16.0 * (self.c_pi + 4.0 * d2))
    }

    fn f_is_concave(&self) -> bool {
        true
    }
}

/// Functional-inequality regime of a target, with its constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Convex { m: f64 },
    Lsi { c_lsi: f64 },
    Poincare { c_pi: f64 },
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Convex { .. } => "convex",
            Regime::Lsi { .. } => "lsi",
            Regime::Poincare { .. } => "poincare",
        }
    }

    /// Looks a regime up by name; `constant` is `m`, `C_LSI` or `C_PI`.
    pub fn from_name(name: &str, constant: f64) -> Result<Self> {
        if !(constant > 0.0 && constant.is_finite()) {
            return Err(Error::invalid(format!("regime constant must be positive, got {constant}")));
        }
        match name.trim().to_ascii_lowercase().as_str() {
            "convex" => Ok(Regime::Convex { m: constant }),
            "lsi" => Ok(Regime::Lsi { c_lsi: constant }),
            "poincare" | "pi" => Ok(Regime::Poincare { c_pi: constant }),
            other => Err(Error::UnknownName {
                kind: "regime",
                name: other.to_string(),
                known: "convex, lsi, poincare".into(),
            }),
        }
    }

    pub fn profile(&self) -> Box<dyn IsoProfile> {
        match *self {
            Regime::Convex { m } => Box::new(ConvexProfile { m }),
            Regime::Lsi { c_lsi } => Box::new(LsiProfile { c_lsi }),
            Regime::Poincare { c_pi } => Box::new(PoincareProfile { c_pi }),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

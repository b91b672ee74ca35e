use std::fmt;
use std::str::FromStr;

use super::config::{ExperimentConfig, HGrid};
use crate::error::{Error, Result};
use crate::samplers::KernelKind;
use crate::targets::{ModelKind, ModelParams};

/// The four reference sweeps: Bayesian Lasso (1, 2) and sparse logistic
/// regression (3, 4), each with RWM then MALA.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Desk,
    Paper,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4];

    pub fn as_str(&self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }

    pub fn model(&self) -> ModelKind {
        match self {
            Figure::Fig1 | Figure::Fig2 => ModelKind::Lasso,
            Figure::Fig3 | Figure::Fig4 => ModelKind::Logistic,
        }
    }

    pub fn kernel(&self) -> KernelKind {
        match self {
            Figure::Fig1 | Figure::Fig3 => KernelKind::Rwm,
            Figure::Fig2 | Figure::Fig4 => KernelKind::Mala,
        }
    }

    /// Preset sweep for this figure.
    ///
    /// Lasso: d = 10, α = 0.5, λ ∈ {0.5, 1, 2, 8}; desk 10 × 2·10⁴ steps,
    /// paper 40 × 10⁵. Logistic: N = 1000, d = 50, 10% sparse truth,
    /// λ ∈ {0.5, 2, 8}; desk 8 × 2·10⁴, paper 25 × 5·10⁴. Paper scale burns
    /// in 10⁴ steps, desk scale a tenth of the chain.
    pub fn config(&self, scale: Scale) -> ExperimentConfig {
        let model = self.model();
        let (params, lambda_grid) = match model {
            ModelKind::Logistic => (
                ModelParams {
                    d: 50,
                    n_obs: 1000,
                    sparsity: 0.1,
                    ..ModelParams::default()
                },
                vec![0.5, 2.0, 8.0],
            ),
            _ => (
                ModelParams {
                    d: 10,
                    alpha_decay: 0.5,
                    ..ModelParams::default()
                },
                vec![0.5, 1.0, 2.0, 8.0],
            ),
        };
        let (n_trials, chain_length, burn_in) = match (model, scale) {
            (ModelKind::Logistic, Scale::Desk) => (8, 20_000, 2_000),
            (ModelKind::Logistic, Scale::Paper) => (25, 50_000, 10_000),
            (_, Scale::Desk) => (10, 20_000, 2_000),
            (_, Scale::Paper) => (40, 100_000, 10_000),
        };
        ExperimentConfig {
            model,
            params,
            kernel: self.kernel(),
            h_grid: HGrid::auto(),
            lambda_grid,
            n_trials,
            chain_length,
            burn_in,
            master_seed: 2024,
            ..ExperimentConfig::default()
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownName {
                kind: "figure",
                name: s.to_string(),
                known: "fig1, fig2, fig3, fig4".into(),
            })
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "desk" => Ok(Scale::Desk),
            "paper" => Ok(Scale::Paper),
            other => Err(Error::UnknownName {
                kind: "scale",
                name: other.to_string(),
                known: "desk, paper".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for fig in Figure::ALL {
            for scale in [Scale::Desk, Scale::Paper] {
                let cfg = fig.config(scale);
                cfg.validate().unwrap();
                assert_eq!(cfg.kernel, fig.kernel());
            }
            assert_eq!(fig.as_str().parse::<Figure>().unwrap(), fig);
        }
        let desk = Figure::Fig1.config(Scale::Desk);
        assert_eq!((desk.n_trials, desk.chain_length), (10, 20_000));
        let paper = Figure::Fig3.config(Scale::Paper);
        assert_eq!((paper.n_trials, paper.chain_length, paper.burn_in), (25, 50_000, 10_000));
    }
}

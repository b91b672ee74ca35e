use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::{lasso_design_matrix, make_bayesian_lasso, make_logistic_laplace, synth_logistic_data};
use super::{CompositePotential, Gaussian};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Lasso,
    Logistic,
    Gaussian1d,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Lasso => "lasso",
            ModelKind::Logistic => "logistic",
            ModelKind::Gaussian1d => "gaussian1d",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lasso" => Ok(ModelKind::Lasso),
            "logistic" => Ok(ModelKind::Logistic),
            "gaussian1d" => Ok(ModelKind::Gaussian1d),
            other => Err(Error::UnknownName {
                kind: "model",
                name: other.to_string(),
                known: "lasso, logistic, gaussian1d".into(),
            }),
        }
    }
}

/// Inputs shared by the built-in target builders. Unused fields are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub d: usize,
    pub alpha_decay: f64,
    pub lambda: f64,
    pub n_obs: usize,
    pub sparsity: f64,
    pub data_seed: u64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            d: 10,
            alpha_decay: 0.5,
            lambda: 1.0,
            n_obs: 1000,
            sparsity: 0.1,
            data_seed: 0,
        }
    }
}

pub type TargetBuilder = fn(&ModelParams) -> Result<Arc<dyn CompositePotential>>;

/// Target constructors keyed by model name.
pub struct TargetRegistry {
    builders: BTreeMap<String, TargetBuilder>,
}

impl TargetRegistry {
    pub fn empty() -> Self {
        Self {
            builders: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(ModelKind::Lasso.as_str(), build_lasso);
        reg.register(ModelKind::Logistic.as_str(), build_logistic);
        reg.register(ModelKind::Gaussian1d.as_str(), build_gaussian1d);
        reg
    }

    pub fn register(&mut self, name: &str, builder: TargetBuilder) {
        self.builders.insert(name.to_ascii_lowercase(), builder);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.builders.keys().map(String::as_str)
    }

    pub fn build(&self, name: &str, params: &ModelParams) -> Result<Arc<dyn CompositePotential>> {
        let builder = self.builders.get(&name.to_ascii_lowercase()).ok_or_else(|| Error::UnknownName {
            kind: "model",
            name: name.to_string(),
            known: self.names().collect::<Vec<_>>().join(", "),
        })?;
        builder(params)
    }
}

/// Lasso with `A = Σ Vᵀ` from [`lasso_design_matrix`] and `y = 0`.
fn build_lasso(p: &ModelParams) -> Result<Arc<dyn CompositePotential>> {
    if p.d == 0 {
        return Err(Error::invalid("d must be positive"));
    }
    let a = lasso_design_matrix(p.d, p.alpha_decay, p.data_seed);
    Ok(Arc::new(make_bayesian_lasso(a, DVector::zeros(p.d), p.lambda)?))
}

fn build_logistic(p: &ModelParams) -> Result<Arc<dyn CompositePotential>> {
    let data = synth_logistic_data(p.n_obs, p.d, p.sparsity, p.data_seed)?;
    Ok(Arc::new(make_logistic_laplace(data.features, data.labels, p.lambda)?))
}

/// One-dimensional posterior `exp(−x²/2 − λ|x|)`; `λ = 0` is the standard Gaussian.
fn build_gaussian1d(p: &ModelParams) -> Result<Arc<dyn CompositePotential>> {
    if p.lambda == 0.0 {
        Ok(Arc::new(Gaussian::standard(1)))
    } else {
        Ok(Arc::new(make_bayesian_lasso(DMatrix::identity(1, 1), DVector::zeros(1), p.lambda)?))
    }
}

//! Flat `key = value` experiment configs.
//!
//! ```text
//! # Bayesian Lasso, RWM
//! model = lasso
//! d = 10
//! alpha_decay = 0.5
//! lambda_grid = 0.5, 1, 2, 8
//! kernel = rwm
//! h_grid = auto
//! n_trials = 10
//! chain_length = 20000
//! burn_in = 2000
//! master_seed = 1
//! ```
//!
//! Blank lines and everything after `#` are ignored. Keys may appear in any
//! order; a later occurrence overrides an earlier one, which is how config
//! files are layered over the figure presets.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::warn;

use crate::error::{Error, Result};
use crate::samplers::KernelKind;
use crate::targets::{ModelKind, ModelParams};

/// Step-size grid of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum HGrid {
    Explicit(Vec<f64>),
    /// Log-spaced around the step ceiling `h_max` of the reference λ:
    /// `points_per_decade` points per decade on `[h_max/below, h_max·above]`,
    /// always containing `h_max` itself.
    Auto {
        points_per_decade: usize,
        below: f64,
        above: f64,
        reference_lambda: f64,
    },
}

impl HGrid {
    pub fn auto() -> Self {
        HGrid::Auto {
            points_per_decade: 6,
            below: 100.0,
            above: 10.0,
            reference_lambda: 1.0,
        }
    }

    /// Materializes the grid given the reference ceiling.
    pub fn resolve(&self, h_max: f64) -> Vec<f64> {
        match self {
            HGrid::Explicit(v) => v.clone(),
            HGrid::Auto {
                points_per_decade,
                below,
                above,
                ..
            } => {
                let k = *points_per_decade as f64;
                let lo = -(below.log10() * k).round() as i64;
                let hi = (above.log10() * k).round() as i64;
                (lo..=hi).map(|j| h_max * 10f64.powf(j as f64 / k)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    /// `lambda` is overwritten per cell from `lambda_grid`.
    pub params: ModelParams,
    pub kernel: KernelKind,
    pub h_grid: HGrid,
    pub lambda_grid: Vec<f64>,
    pub n_trials: usize,
    pub chain_length: usize,
    pub burn_in: usize,
    pub master_seed: u64,
    pub output_path: PathBuf,
    /// One probe vector ξ for every trial (default) or one per trial.
    pub shared_probe: bool,
    /// 0 means all available cores.
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Lasso,
            params: ModelParams::default(),
            kernel: KernelKind::Rwm,
            h_grid: HGrid::auto(),
            lambda_grid: vec![1.0],
            n_trials: 10,
            chain_length: 20_000,
            burn_in: 2_000,
            master_seed: 0,
            output_path: PathBuf::from("."),
            shared_probe: true,
            workers: 0,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    // accept 1e5-style integers too
    if let Ok(v) = value.parse::<T>() {
        return Ok(v);
    }
    if let Ok(f) = value.parse::<f64>() {
        if f.fract() == 0.0 && f >= 0.0 {
            if let Ok(v) = format!("{f:.0}").parse::<T>() {
                return Ok(v);
            }
        }
    }
    Err(Error::config(key, format!("cannot parse `{value}` as a number")))
}

fn parse_positive(key: &str, value: &str) -> Result<f64> {
    let v: f64 = parse_num(key, value)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(key, format!("must be positive and finite, got `{value}`")))
    }
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    let list = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_positive(key, s))
        .collect::<Result<Vec<_>>>()?;
    if list.is_empty() {
        return Err(Error::config(key, "list must not be empty"));
    }
    Ok(list)
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::config(key, format!("expected true/false, got `{value}`"))),
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

impl ExperimentConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_file(path)?;
        Ok(cfg)
    }

    pub fn apply_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.apply_text(&text)
    }

    /// Applies every `key = value` line of `text` on top of `self`, then
    /// validates the result.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::config(
                    line.to_string(),
                    format!("line {} is not of the form key = value", lineno + 1),
                ));
            };
            self.set(key.trim(), value.trim())?;
        }
        self.validate()
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let wrap = |e: Error| match e {
            Error::UnknownName { name, known, .. } => {
                Error::config(key, format!("unknown value `{name}` (known: {known})"))
            }
            other => other,
        };
        match key {
            "model" => self.model = value.parse().map_err(wrap)?,
            "kernel" => self.kernel = value.parse().map_err(wrap)?,
            "d" => self.params.d = parse_num(key, value)?,
            "alpha_decay" => self.params.alpha_decay = parse_positive(key, value)?,
            "N" | "n_obs" => self.params.n_obs = parse_num(key, value)?,
            "sparsity" => self.params.sparsity = parse_num(key, value)?,
            "data_seed" => self.params.data_seed = parse_num(key, value)?,
            "lambda" => {
                let v: f64 = parse_num(key, value)?;
                self.lambda_grid = vec![v];
            }
            "lambda_grid" => {
                self.lambda_grid = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_num::<f64>(key, s))
                    .collect::<Result<Vec<_>>>()?;
            }
            "h_grid" => {
                self.h_grid = if value.eq_ignore_ascii_case("auto") {
                    match &self.h_grid {
                        HGrid::Auto { .. } => self.h_grid.clone(),
                        HGrid::Explicit(_) => HGrid::auto(),
                    }
                } else {
                    HGrid::Explicit(parse_list(key, value)?)
                }
            }
            "h_points_per_decade" | "h_span_below" | "h_span_above" | "h_reference_lambda" => {
                let HGrid::Auto {
                    points_per_decade,
                    below,
                    above,
                    reference_lambda,
                } = &mut self.h_grid
                else {
                    return Err(Error::config(key, "only meaningful with h_grid = auto"));
                };
                match key {
                    "h_points_per_decade" => *points_per_decade = parse_num(key, value)?,
                    "h_span_below" => *below = parse_positive(key, value)?,
                    "h_span_above" => *above = parse_positive(key, value)?,
                    _ => *reference_lambda = parse_num(key, value)?,
                }
            }
            "n_trials" => self.n_trials = parse_num(key, value)?,
            "chain_length" => self.chain_length = parse_num(key, value)?,
            "burn_in" => self.burn_in = parse_num(key, value)?,
            "master_seed" => self.master_seed = parse_num(key, value)?,
            "output_path" => self.output_path = PathBuf::from(value),
            "shared_probe" => self.shared_probe = parse_bool(key, value)?,
            "workers" => self.workers = parse_num(key, value)?,
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.params.d == 0 {
            return Err(Error::config("d", "must be positive"));
        }
        if self.model == ModelKind::Gaussian1d && self.params.d != 1 {
            return Err(Error::config("d", "gaussian1d is one-dimensional"));
        }
        if self.lambda_grid.is_empty() {
            return Err(Error::config("lambda_grid", "must not be empty"));
        }
        if let Some(l) = self.lambda_grid.iter().find(|l| !(**l >= 0.0 && l.is_finite())) {
            return Err(Error::config("lambda_grid", format!("λ must be nonnegative, got {l}")));
        }
        match &self.h_grid {
            HGrid::Explicit(v) if v.is_empty() => return Err(Error::config("h_grid", "must not be empty")),
            HGrid::Auto {
                points_per_decade, ..
            } if *points_per_decade == 0 => {
                return Err(Error::config("h_points_per_decade", "must be positive"));
            }
            _ => {}
        }
        if self.n_trials == 0 {
            return Err(Error::config("n_trials", "must be positive"));
        }
        if self.chain_length < 16 {
            return Err(Error::config("chain_length", "must be at least 16"));
        }
        if !(0.0..=1.0).contains(&self.params.sparsity) {
            return Err(Error::config("sparsity", "must lie in [0, 1]"));
        }
        if self.chain_length < 10 * self.burn_in {
            warn!(
                "chain_length {} is shorter than 10 × burn_in ({})",
                self.chain_length, self.burn_in
            );
        }
        Ok(())
    }

    /// Renders the config in the same format [`apply_text`](Self::apply_text)
    /// reads.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let p = &self.params;
        let _ = writeln!(s, "model = {}", self.model);
        let _ = writeln!(s, "kernel = {}", self.kernel);
        let _ = writeln!(s, "d = {}", p.d);
        let _ = writeln!(s, "alpha_decay = {:?}", p.alpha_decay);
        let _ = writeln!(s, "N = {}", p.n_obs);
        let _ = writeln!(s, "sparsity = {:?}", p.sparsity);
        let _ = writeln!(s, "data_seed = {}", p.data_seed);
        let _ = writeln!(s, "lambda_grid = {}", join(&self.lambda_grid));
        match &self.h_grid {
            HGrid::Explicit(v) => {
                let _ = writeln!(s, "h_grid = {}", join(v));
            }
            HGrid::Auto {
                points_per_decade,
                below,
                above,
                reference_lambda,
            } => {
                let _ = writeln!(s, "h_grid = auto");
                let _ = writeln!(s, "h_points_per_decade = {points_per_decade}");
                let _ = writeln!(s, "h_span_below = {below:?}");
                let _ = writeln!(s, "h_span_above = {above:?}");
                let _ = writeln!(s, "h_reference_lambda = {reference_lambda:?}");
            }
        }
        let _ = writeln!(s, "n_trials = {}", self.n_trials);
        let _ = writeln!(s, "chain_length = {}", self.chain_length);
        let _ = writeln!(s, "burn_in = {}", self.burn_in);
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        let _ = writeln!(s, "output_path = {}", self.output_path.display());
        let _ = writeln!(s, "shared_probe = {}", self.shared_probe);
        let _ = writeln!(s, "workers = {}", self.workers);
        s
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }
}

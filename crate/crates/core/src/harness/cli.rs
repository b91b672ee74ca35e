//! The `nsgap` command line.
//!
//! ```text
//! nsgap sample       --model lasso --kernel rwm --step 0.005 --steps 20000 --out trace.csv
//! nsgap estimate-gap --trace trace.csv [--model lasso ...]
//! nsgap bounds       --kernel rwm --regime convex -d 10 -M 1 -m 0.1 -L 1 -h 0.01 [--csv]
//! nsgap oracle       --lambda 1 --kernel rwm --step 0.0625 --n 400,800 --radius 8
//! nsgap reproduce    fig1 [--scale desk|paper] [--out DIR] [--config FILE]
//! nsgap run          --config FILE [--name STEM]
//! ```
//!
//! Exit status: 0 success, 1 usage or config error, 2 runtime failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use nalgebra::DVector;

use super::{format_f64, run_experiment_with, ExperimentConfig, Figure, RowWriter, Scale};
use crate::diagnostics::{estimate_gap_from_samples, TestFunctionSuite};
use crate::error::{Error, Result};
use crate::oracle::{discretize_kernel, exact_gap};
use crate::samplers::{read_trace_csv, run_chain, write_trace_csv, KernelKind, KernelSpec};
use crate::targets::{find_mode, CompositePotential, ModelKind, ModelParams, Regularity, TargetRegistry};
use crate::theory::{mala_gap_bound, rwm_gap_bound, BoundReport, Regime};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "nsgap", version, about = "Metropolis samplers on non-smooth targets and their spectral gaps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one chain and write its trace as CSV.
    Sample(SampleArgs),
    /// Estimate the spectral gap of a stored trace.
    EstimateGap(EstimateArgs),
    /// Print the closed-form step ceiling and gap lower bound.
    Bounds(BoundsArgs),
    /// Exact gap of a one-dimensional kernel on refined grids.
    Oracle(OracleArgs),
    /// Run one of the reference sweeps and write its CSVs.
    Reproduce(ReproduceArgs),
    /// Run a sweep described by a config file.
    Run(RunArgs),
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, default_value = "lasso")]
    model: ModelKind,
    #[arg(short = 'd', long = "dim", default_value_t = 10)]
    dim: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha_decay: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long = "n-obs", default_value_t = 1000)]
    n_obs: usize,
    #[arg(long, default_value_t = 0.1)]
    sparsity: f64,
    #[arg(long, default_value_t = 0)]
    data_seed: u64,
}

impl ModelArgs {
    fn build(&self) -> Result<std::sync::Arc<dyn CompositePotential>> {
        let params = ModelParams {
            d: self.dim,
            alpha_decay: self.alpha_decay,
            lambda: self.lambda,
            n_obs: self.n_obs,
            sparsity: self.sparsity,
            data_seed: self.data_seed,
        };
        TargetRegistry::builtin().build(self.model.as_str(), &params)
    }
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value = "rwm")]
    kernel: KernelKind,
    /// Step size h.
    #[arg(long)]
    step: f64,
    #[arg(long, default_value_t = 20_000)]
    steps: usize,
    #[arg(long, default_value_t = 2_000)]
    burn_in: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Seed of the probe vector ξ.
    #[arg(long, default_value_t = 0)]
    probe_seed: u64,
    /// Target of the trace; enables the log-density test function.
    #[arg(long)]
    model: Option<ModelKind>,
    #[arg(short = 'd', long = "dim")]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    alpha_decay: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long = "n-obs", default_value_t = 1000)]
    n_obs: usize,
    #[arg(long, default_value_t = 0.1)]
    sparsity: f64,
    #[arg(long, default_value_t = 0)]
    data_seed: u64,
    /// Also write the per-function table here.
    #[arg(long)]
    out: Option<PathBuf>,
}

// -h is the step size here, so help is long-only.
#[derive(Args, Debug)]
#[command(disable_help_flag = true)]
struct BoundsArgs {
    #[arg(long, default_value = "rwm")]
    kernel: KernelKind,
    /// convex, lsi or poincare.
    #[arg(long, default_value = "convex")]
    regime: String,
    #[arg(short = 'd')]
    d: usize,
    /// Gradient-Lipschitz constant of f.
    #[arg(short = 'M')]
    smoothness: f64,
    /// Strong log-concavity constant.
    #[arg(short = 'm')]
    concavity: Option<f64>,
    /// Lipschitz constant of g.
    #[arg(short = 'L')]
    lipschitz: f64,
    /// Step size.
    #[arg(short = 'h')]
    step: f64,
    #[arg(long = "c-lsi")]
    c_lsi: Option<f64>,
    #[arg(long = "c-pi")]
    c_pi: Option<f64>,
    /// Also print a CSV header and row.
    #[arg(long)]
    csv: bool,
    #[arg(long, action = ArgAction::Help)]
    help: Option<bool>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, default_value = "gaussian1d")]
    model: ModelKind,
    /// 0 gives the standard Gaussian for `gaussian1d`.
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    #[arg(long, default_value = "rwm")]
    kernel: KernelKind,
    #[arg(long)]
    step: f64,
    #[arg(long, value_delimiter = ',', default_value = "400,800")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "8")]
    radius: Vec<f64>,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    figure: Figure,
    #[arg(long, default_value = "desk")]
    scale: Scale,
    /// Output directory; defaults to the config's output_path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Config keys layered over the figure preset.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// File stem of the output CSVs.
    #[arg(long, default_value = "experiment")]
    name: String,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn cli_main<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Config { .. } | Error::UnknownName { .. } => EXIT_USAGE,
                _ => EXIT_RUNTIME,
            }
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Sample(a) => sample(a, out),
        Command::EstimateGap(a) => estimate(a, out),
        Command::Bounds(a) => bounds(a, out),
        Command::Oracle(a) => oracle(a, out),
        Command::Reproduce(a) => reproduce(a, out),
        Command::Run(a) => run(a, out),
    }
}

fn sample(a: SampleArgs, out: &mut dyn Write) -> Result<()> {
    let pot = a.model.build()?;
    let spec = KernelSpec::new(a.kernel, a.step)?;
    let x0 = find_mode(pot.as_ref(), &DVector::zeros(pot.dim()), 200);
    let chain = run_chain(pot.as_ref(), &spec, &x0, a.steps, a.burn_in, a.seed)?;
    write_trace_csv(&a.out, &chain)?;
    writeln!(
        out,
        "wrote {} states to {} (acceptance {})",
        chain.len(),
        a.out.display(),
        format_f64(chain.acceptance_rate())
    )?;
    Ok(())
}

fn estimate(a: EstimateArgs, out: &mut dyn Write) -> Result<()> {
    let trace = read_trace_csv(&a.trace)?;
    let Some(first) = trace.samples.first() else {
        return Err(Error::InsufficientData("trace is empty".into()));
    };
    let dim = first.len();
    let log_densities = match a.model {
        None => None,
        Some(model) => {
            let params = ModelParams {
                d: a.dim.unwrap_or(dim),
                alpha_decay: a.alpha_decay,
                lambda: a.lambda,
                n_obs: a.n_obs,
                sparsity: a.sparsity,
                data_seed: a.data_seed,
            };
            let pot = TargetRegistry::builtin().build(model.as_str(), &params)?;
            if pot.dim() != dim {
                return Err(Error::invalid(format!("trace has dimension {dim}, target has {}", pot.dim())));
            }
            Some(trace.samples.iter().map(|x| pot.log_density(x)).collect::<Vec<_>>())
        }
    };
    let suite = TestFunctionSuite::from_seed(dim, a.probe_seed);
    let est = estimate_gap_from_samples(&trace.samples, log_densities.as_deref(), trace.acceptance_rate(), &suite)?;
    est.write_csv(&mut *out)?;
    writeln!(out, "{}", est.summary_line())?;
    if let Some(path) = a.out {
        est.write_csv(std::fs::File::create(path)?)?;
    }
    Ok(())
}

fn bound_report(a: &BoundsArgs) -> Result<BoundReport> {
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| Error::invalid(format!("regime `{}` needs {flag}", a.regime)))
    };
    match a.kernel {
        KernelKind::Rwm => {
            let regime = match a.regime.trim().to_ascii_lowercase().as_str() {
                "convex" => Regime::from_name("convex", need(a.concavity, "-m")?)?,
                "lsi" => Regime::from_name("lsi", need(a.c_lsi, "--c-lsi")?)?,
                "poincare" | "pi" => Regime::from_name("poincare", need(a.c_pi, "--c-pi")?)?,
                other => Regime::from_name(other, 1.0)?,
            };
            rwm_gap_bound(a.d, a.smoothness, a.lipschitz, regime, a.step)
        }
        KernelKind::Mala => {
            if !a.regime.eq_ignore_ascii_case("convex") {
                return Err(Error::invalid("MALA bounds exist only for the convex regime"));
            }
            let reg = Regularity {
                smoothness_m: a.smoothness,
                lipschitz_l: a.lipschitz,
                strong_concavity_m: Some(need(a.concavity, "-m")?),
                f_concave: true,
            };
            mala_gap_bound(a.d, &reg, a.step)
        }
    }
}

fn bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<()> {
    let r = bound_report(&a)?;
    let mut lines: Vec<(String, String)> = vec![
        ("kernel".into(), r.kernel.to_string()),
        ("regime".into(), r.regime.to_string()),
        ("d".into(), a.d.to_string()),
        ("h".into(), format_f64(a.step)),
        ("h_max".into(), format_f64(r.h_max)),
        ("epsilon".into(), format_f64(r.epsilon)),
        ("delta".into(), format_f64(r.delta)),
        ("gap_lower".into(), format_f64(r.gap_lower)),
    ];
    lines.extend(r.constants_used.iter().map(|(k, v)| (k.to_string(), format_f64(*v))));
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in &lines {
        writeln!(out, "{k:<width$}  {v}")?;
    }
    if a.csv {
        let opt = |v: Option<f64>| v.map(format_f64).unwrap_or_default();
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(["kernel", "regime", "d", "M", "m", "L", "C_LSI", "C_PI", "h", "h_max", "epsilon", "delta", "gap_lower"])?;
        w.write_record([
            r.kernel.to_string(),
            r.regime.to_string(),
            a.d.to_string(),
            format_f64(a.smoothness),
            opt(a.concavity),
            format_f64(a.lipschitz),
            opt(a.c_lsi),
            opt(a.c_pi),
            format_f64(a.step),
            format_f64(r.h_max),
            format_f64(r.epsilon),
            format_f64(r.delta),
            format_f64(r.gap_lower),
        ])?;
        w.flush()?;
    }
    Ok(())
}

fn oracle(a: OracleArgs, out: &mut dyn Write) -> Result<()> {
    let params = ModelParams {
        d: 1,
        lambda: a.lambda,
        ..ModelParams::default()
    };
    let pot = TargetRegistry::builtin().build(a.model.as_str(), &params)?;
    let spec = KernelSpec::new(a.kernel, a.step)?;
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(["n", "R", "gap"])?;
    for &radius in &a.radius {
        for &n in &a.n {
            let gap = exact_gap(&discretize_kernel(pot.as_ref(), &spec, n, radius)?)?;
            w.write_record([n.to_string(), format_f64(radius), format_f64(gap)])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn sweep(cfg: &ExperimentConfig, dir: &std::path::Path, stem: &str, out: &mut dyn Write) -> Result<()> {
    let mut writer = RowWriter::create(dir, stem)?;
    let mut write_err = None;
    run_experiment_with(cfg, &TargetRegistry::builtin(), |row| {
        if write_err.is_none() {
            write_err = writer.write(row).err();
        }
    })?;
    if let Some(e) = write_err {
        return Err(e);
    }
    let (g, acc) = writer.paths();
    writeln!(out, "wrote {} and {}", g.display(), acc.display())?;
    Ok(())
}

fn reproduce(a: ReproduceArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = a.figure.config(a.scale);
    if let Some(path) = &a.config {
        cfg.apply_file(path)?;
    }
    if let Some(seed) = a.seed {
        cfg.master_seed = seed;
    }
    let dir = a.out.unwrap_or_else(|| cfg.output_path.clone());
    sweep(&cfg, &dir, a.figure.as_str(), out)
}

fn run(a: RunArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = ExperimentConfig::from_file(&a.config)?;
    sweep(&cfg, &cfg.output_path.clone(), &a.name, out)
}

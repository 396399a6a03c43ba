use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fisher_shannon::dynamics::{LogisticConfig, DEFAULT_BURN_IN, DEFAULT_ITERATIONS, DEFAULT_X0};
use fisher_shannon::windows::DEFAULT_MIN_POINTS;
use fisher_shannon::{Bandwidth, ParametricModel, WindowSpec};

use crate::error::{CliError, Result};

/// Fisher-Shannon analysis of time series.
#[derive(Debug, Parser)]
#[command(name = "fisher-shannon", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Commands,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Windowed SEP, FIM and FSC of an "index,value" CSV series.
    Analyze(AnalyzeArgs),
    /// Logistic-map sweep over c with windowed measures and Lyapunov exponents.
    Logistic(LogisticArgs),
    /// Closed-form measures of a parametric family.
    Parametric(ParametricArgs),
    /// Whole-sample kernel estimates of the measures.
    Estimate(EstimateArgs),
    /// Iso-complexity curves of the information plane, plus optional points.
    Fsip(FsipArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Window width in index units.
    #[arg(long)]
    pub width: f64,
    #[arg(long)]
    pub stride: f64,
    #[arg(long, default_value_t = DEFAULT_MIN_POINTS)]
    pub min_points: usize,
}

#[derive(Debug, Args)]
pub struct LogisticArgs {
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 3.5)]
    pub c_lo: f64,
    #[arg(long, default_value_t = 4.0)]
    pub c_hi: f64,
    #[arg(long, default_value_t = 2.5e-4)]
    pub c_step: f64,
    /// Window width in units of c.
    #[arg(long, default_value_t = 2.5e-3)]
    pub width: f64,
    #[arg(long)]
    pub stride: f64,
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    pub n_iterations: usize,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    pub burn_in: usize,
    #[arg(long, default_value_t = DEFAULT_X0)]
    pub x0: f64,
    /// Variance of the additive Gaussian noise.
    #[arg(long, conflicts_with = "noise_std")]
    pub noise_variance: Option<f64>,
    /// Standard deviation of the additive Gaussian noise.
    #[arg(long)]
    pub noise_std: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MIN_POINTS)]
    pub min_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Gaussian,
    Gamma,
    Weibull,
    #[value(alias = "lognormal")]
    LogNormal,
}

#[derive(Debug, Args)]
pub struct ParametricArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Fixed kernel bandwidth instead of the plug-in selector.
    #[arg(long)]
    pub bandwidth: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FsipArgs {
    /// Complexity level of a curve; repeat for several curves.
    #[arg(long = "complexity", required = true)]
    pub complexities: Vec<f64>,
    #[arg(long, default_value_t = 1e-2)]
    pub sep_lo: f64,
    #[arg(long, default_value_t = 1e2)]
    pub sep_hi: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// CSV of "sep,fim" points to place on the plane.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub c_lo: f64,
    pub c_hi: f64,
    pub c_step: f64,
    pub template: LogisticConfig,
    pub noise_variance: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Analyze {
        input: PathBuf,
        window: WindowSpec,
    },
    Logistic {
        sweep: SweepParams,
        window: WindowSpec,
    },
    Parametric {
        model: ParametricModel,
    },
    Estimate {
        input: PathBuf,
        bandwidth: Option<Bandwidth>,
    },
    Fsip {
        complexities: Vec<f64>,
        sep_lo: f64,
        sep_hi: f64,
        points: usize,
        input: Option<PathBuf>,
    },
}

/// A validated invocation: one command plus where its CSV goes
/// (standard output when `output` is `None`).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub output: Option<PathBuf>,
}

fn required(value: Option<f64>, flag: &str, family: &str) -> Result<f64> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for the {family} family")))
}

fn noise_variance(args: &LogisticArgs) -> Result<f64> {
    match (args.noise_variance, args.noise_std) {
        (Some(v), _) => Ok(v),
        (None, Some(s)) if s.is_finite() && s >= 0.0 => Ok(s * s),
        (None, Some(s)) => Err(CliError::Usage(format!(
            "noise standard deviation must be non-negative, got {s}"
        ))),
        (None, None) => Ok(0.0),
    }
}

impl TryFrom<Cli> for RunConfig {
    type Error = CliError;

    fn try_from(cli: Cli) -> Result<Self> {
        let (command, output) = match cli.command {
            Commands::Analyze(a) => (
                Command::Analyze {
                    input: a.input,
                    window: WindowSpec::new(a.width, a.stride, a.min_points)?,
                },
                a.output,
            ),
            Commands::Logistic(a) => {
                let sweep = SweepParams {
                    c_lo: a.c_lo,
                    c_hi: a.c_hi,
                    c_step: a.c_step,
                    template: LogisticConfig::new(a.c_lo, a.x0, a.n_iterations, a.burn_in)?,
                    noise_variance: noise_variance(&a)?,
                    seed: a.seed,
                };
                fisher_shannon::dynamics::sweep_grid(sweep.c_lo, sweep.c_hi, sweep.c_step)?;
                LogisticConfig::new(sweep.c_hi, a.x0, a.n_iterations, a.burn_in)?;
                if !(sweep.noise_variance.is_finite() && sweep.noise_variance >= 0.0) {
                    return Err(CliError::Usage(format!(
                        "noise variance must be non-negative, got {}",
                        sweep.noise_variance
                    )));
                }
                let window = WindowSpec::new(a.width, a.stride, a.min_points)?;
                (Command::Logistic { sweep, window }, a.output)
            }
            Commands::Parametric(a) => {
                let model = match a.family {
                    Family::Gaussian => ParametricModel::gaussian(required(a.sigma, "sigma", "gaussian")?)?,
                    Family::Gamma => ParametricModel::gamma(
                        required(a.theta, "theta", "gamma")?,
                        required(a.k, "k", "gamma")?,
                    )?,
                    Family::Weibull => ParametricModel::weibull(
                        a.mu.unwrap_or(0.0),
                        required(a.lambda, "lambda", "weibull")?,
                        required(a.k, "k", "weibull")?,
                    )?,
                    Family::LogNormal => ParametricModel::log_normal(
                        a.mu.unwrap_or(0.0),
                        required(a.sigma, "sigma", "log-normal")?,
                    )?,
                };
                (Command::Parametric { model }, a.output)
            }
            Commands::Estimate(a) => (
                Command::Estimate {
                    input: a.input,
                    bandwidth: a
                        .bandwidth
                        .map(Bandwidth::new)
                        .transpose()
                        .map_err(|e| CliError::Usage(e.to_string()))?,
                },
                a.output,
            ),
            Commands::Fsip(a) => {
                if !(a.sep_lo > 0.0 && a.sep_lo < a.sep_hi && a.sep_hi.is_finite()) {
                    return Err(CliError::Usage(format!(
                        "need 0 < --sep-lo < --sep-hi, got {} and {}",
                        a.sep_lo, a.sep_hi
                    )));
                }
                if a.points < 2 {
                    return Err(CliError::Usage("--points must be at least 2".into()));
                }
                (
                    Command::Fsip {
                        complexities: a.complexities,
                        sep_lo: a.sep_lo,
                        sep_hi: a.sep_hi,
                        points: a.points,
                        input: a.input,
                    },
                    a.output,
                )
            }
        };
        Ok(RunConfig { command, output })
    }
}

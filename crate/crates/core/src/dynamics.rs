//! Logistic map trajectories, additive Gaussian noise and Lyapunov
//! exponents, plus the bifurcation sweep that feeds parameter-indexed
//! windowing.
//!
//! Noise comes from ChaCha8 seeded with `seed_from_u64(seed)`; the sweep
//! gives grid point `j` its own ChaCha stream `j`, so the output does not
//! depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::windows::TimeSeries;

pub const DEFAULT_X0: f64 = 0.5;
pub const DEFAULT_BURN_IN: usize = 200;
pub const DEFAULT_ITERATIONS: usize = 1000;
/// Minimum trajectory length for a Lyapunov average.
pub const MIN_LYAPUNOV_ITERATIONS: usize = 1000;

/// Parameters of one logistic-map run `x_{n+1} = c·x_n·(1 - x_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    pub c: f64,
    pub x0: f64,
    pub n_iterations: usize,
    pub burn_in: usize,
}

impl LogisticConfig {
    pub fn new(c: f64, x0: f64, n_iterations: usize, burn_in: usize) -> Result<Self> {
        let cfg = LogisticConfig {
            c,
            x0,
            n_iterations,
            burn_in,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=4.0).contains(&self.c) {
            return Err(Error::Config(format!("control parameter c must lie in [0, 4], got {}", self.c)));
        }
        if !(0.0..=1.0).contains(&self.x0) {
            return Err(Error::Config(format!("x0 must lie in [0, 1], got {}", self.x0)));
        }
        Ok(())
    }

    pub fn with_c(&self, c: f64) -> Self {
        LogisticConfig { c, ..*self }
    }
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            c: 4.0,
            x0: DEFAULT_X0,
            n_iterations: DEFAULT_ITERATIONS,
            burn_in: DEFAULT_BURN_IN,
        }
    }
}

/// The last `n_iterations` of `burn_in + n_iterations` map iterations.
pub fn logistic_trajectory(cfg: &LogisticConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let c = cfg.c;
    let mut x = cfg.x0;
    for _ in 0..cfg.burn_in {
        x = c * x * (1.0 - x);
    }
    let mut out = Vec::with_capacity(cfg.n_iterations);
    for _ in 0..cfg.n_iterations {
        x = c * x * (1.0 - x);
        out.push(x);
    }
    Ok(out)
}

fn noise_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn add_noise_from(values: &[f64], variance: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let sd = variance.sqrt();
    values
        .iter()
        .map(|&v| {
            let z: f64 = StandardNormal.sample(rng);
            v + sd * z
        })
        .collect()
}

/// `values + N(0, variance)` noise; `variance = 0` returns the input.
pub fn add_gaussian_noise(values: &[f64], variance: f64, seed: u64) -> Result<Vec<f64>> {
    if !(variance.is_finite() && variance >= 0.0) {
        return Err(Error::Config(format!("noise variance must be non-negative, got {variance}")));
    }
    if variance == 0.0 {
        return Ok(values.to_vec());
    }
    Ok(add_noise_from(values, variance, &mut noise_rng(seed, 0)))
}

/// A Lyapunov exponent, or the flag for a trajectory that hit the critical
/// point `x = 1/2` exactly (the average would be -∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lyapunov {
    Finite(f64),
    Superstable,
}

impl Lyapunov {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Lyapunov::Finite(v) => Some(v),
            Lyapunov::Superstable => None,
        }
    }

    /// Numeric view, with `Superstable` mapped to -∞.
    pub fn as_f64(&self) -> f64 {
        self.value().unwrap_or(f64::NEG_INFINITY)
    }
}

/// `(1/n) Σ log|c(1 - 2xᵢ)|` over the post-burn-in trajectory.
pub fn lyapunov_logistic(cfg: &LogisticConfig) -> Result<Lyapunov> {
    if cfg.n_iterations < MIN_LYAPUNOV_ITERATIONS {
        return Err(Error::Config(format!(
            "Lyapunov exponent needs at least {MIN_LYAPUNOV_ITERATIONS} iterations, got {}",
            cfg.n_iterations
        )));
    }
    let trajectory = logistic_trajectory(cfg)?;
    Ok(lyapunov_of_trajectory(cfg.c, &trajectory))
}

fn lyapunov_of_trajectory(c: f64, trajectory: &[f64]) -> Lyapunov {
    let mut sum = 0.0;
    for &x in trajectory {
        let slope = (c * (1.0 - 2.0 * x)).abs();
        if slope == 0.0 {
            return Lyapunov::Superstable;
        }
        sum += slope.ln();
    }
    Lyapunov::Finite(sum / trajectory.len() as f64)
}

/// Sweep grid of control values, `c_lo + j·c_step` clamped to `c_hi`.
pub fn sweep_grid(c_lo: f64, c_hi: f64, c_step: f64) -> Result<Vec<f64>> {
    if !(c_step.is_finite() && c_step > 0.0) {
        return Err(Error::Config(format!("c_step must be positive, got {c_step}")));
    }
    if !(0.0 <= c_lo && c_lo < c_hi && c_hi <= 4.0) {
        return Err(Error::Config(format!(
            "sweep requires 0 <= c_lo < c_hi <= 4, got [{c_lo}, {c_hi}]"
        )));
    }
    let count = ((c_hi - c_lo) / c_step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|j| (c_lo + j as f64 * c_step).min(c_hi)).collect())
}

/// Output of a bifurcation sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    /// Trajectory points indexed by their control value (ascending c).
    pub series: TimeSeries,
    /// Lyapunov exponent of each noiseless trajectory, per grid value.
    pub lyapunov: Vec<(f64, Lyapunov)>,
    pub noise_variance: f64,
}

/// Runs the logistic map at every grid value of c, optionally adds
/// Gaussian noise to the emitted points (Lyapunov exponents always use the
/// noiseless trajectory) and pools the points into a c-indexed series.
pub fn bifurcation_sweep(
    c_lo: f64,
    c_hi: f64,
    c_step: f64,
    template: &LogisticConfig,
    noise_variance: f64,
    seed: u64,
) -> Result<Sweep> {
    if !(noise_variance.is_finite() && noise_variance >= 0.0) {
        return Err(Error::Config(format!(
            "noise variance must be non-negative, got {noise_variance}"
        )));
    }
    let grid = sweep_grid(c_lo, c_hi, c_step)?;
    template.with_c(grid[0]).validate()?;
    let runs: Vec<(Vec<f64>, Lyapunov)> = grid
        .par_iter()
        .enumerate()
        .map(|(j, &c)| {
            let cfg = template.with_c(c);
            let clean = logistic_trajectory(&cfg)?;
            let lyap = lyapunov_of_trajectory(c, &clean);
            let values = if noise_variance > 0.0 {
                add_noise_from(&clean, noise_variance, &mut noise_rng(seed, j as u64))
            } else {
                clean
            };
            Ok((values, lyap))
        })
        .collect::<Result<_>>()?;

    let total: usize = runs.iter().map(|(v, _)| v.len()).sum();
    let mut index = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    let mut lyapunov = Vec::with_capacity(grid.len());
    for (&c, (vals, lyap)) in grid.iter().zip(runs) {
        index.extend(std::iter::repeat_n(c, vals.len()));
        values.extend(vals);
        lyapunov.push((c, lyap));
    }
    Ok(Sweep {
        series: TimeSeries::parameter_indexed(index, values)?,
        lyapunov,
        noise_variance,
    })
}

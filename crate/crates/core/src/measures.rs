//! Shannon entropy power, Fisher information and Fisher-Shannon complexity.
//!
//! Two routes are provided: closed forms for a handful of parametric
//! families, and integral estimates that plug a Gaussian KDE (and its
//! derivative) into the defining integrals
//!
//! ```text
//! H = -∫ f log f        N = exp(2H) / (2πe)        I = ∫ (f')² / f        C = N·I
//! ```
//!
//! A single plug-in bandwidth feeds both the entropy and the Fisher
//! integral of a sample.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::kde::{sj_dpi_bandwidth, Bandwidth, Kde, Sample};
use crate::quadrature::{kde_partitions, Integrator};
use crate::special::{digamma, gamma_fn, log_gamma, EULER_MASCHERONI};

/// Densities below this are treated as zero inside log and division.
pub const DENSITY_FLOOR: f64 = 1e-300;

/// (SEP, FIM, FSC) with FSC always recomputed as SEP × FIM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoTriple {
    sep: f64,
    fim: f64,
    fsc: f64,
}

impl InfoTriple {
    pub fn new(sep: f64, fim: f64) -> Result<Self> {
        if !(sep.is_finite() && sep > 0.0) {
            return Err(Error::Domain(format!("entropy power must be finite and positive, got {sep}")));
        }
        if !(fim.is_finite() && fim > 0.0) {
            return Err(Error::Domain(format!(
                "Fisher information must be finite and positive, got {fim}"
            )));
        }
        Ok(InfoTriple {
            sep,
            fim,
            fsc: sep * fim,
        })
    }

    /// Shannon entropy power N_X (units of data²).
    pub fn sep(&self) -> f64 {
        self.sep
    }

    /// Fisher information measure I_X (units of data⁻²).
    pub fn fim(&self) -> f64 {
        self.fim
    }

    /// Fisher-Shannon complexity C_X = N_X · I_X.
    pub fn fsc(&self) -> f64 {
        self.fsc
    }
}

/// Parametric families with closed-form measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParametricModel {
    Gaussian { sigma: f64 },
    Gamma { theta: f64, k: f64 },
    Weibull { mu: f64, lambda: f64, k: f64 },
    LogNormal { mu: f64, sigma: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite and positive, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {v}")))
    }
}

impl ParametricModel {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        positive("sigma", sigma)?;
        Ok(ParametricModel::Gaussian { sigma })
    }

    pub fn gamma(theta: f64, k: f64) -> Result<Self> {
        positive("theta", theta)?;
        positive("k", k)?;
        Ok(ParametricModel::Gamma { theta, k })
    }

    pub fn weibull(mu: f64, lambda: f64, k: f64) -> Result<Self> {
        finite("mu", mu)?;
        positive("lambda", lambda)?;
        positive("k", k)?;
        Ok(ParametricModel::Weibull { mu, lambda, k })
    }

    pub fn log_normal(mu: f64, sigma: f64) -> Result<Self> {
        finite("mu", mu)?;
        positive("sigma", sigma)?;
        Ok(ParametricModel::LogNormal { mu, sigma })
    }

    /// Re-checks the parameter invariants (variants can be built directly).
    pub fn validate(&self) -> Result<()> {
        match *self {
            ParametricModel::Gaussian { sigma } => Self::gaussian(sigma).map(drop),
            ParametricModel::Gamma { theta, k } => Self::gamma(theta, k).map(drop),
            ParametricModel::Weibull { mu, lambda, k } => Self::weibull(mu, lambda, k).map(drop),
            ParametricModel::LogNormal { mu, sigma } => Self::log_normal(mu, sigma).map(drop),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ParametricModel::Gaussian { .. } => "gaussian",
            ParametricModel::Gamma { .. } => "gamma",
            ParametricModel::Weibull { .. } => "weibull",
            ParametricModel::LogNormal { .. } => "lognormal",
        }
    }

    fn require_shape_above_two(&self) -> Result<()> {
        match *self {
            ParametricModel::Gamma { k, .. } | ParametricModel::Weibull { k, .. } if k <= 2.0 => {
                Err(Error::ShapeDomain { k })
            }
            _ => Ok(()),
        }
    }
}

/// Closed-form entropy power; defined for every valid parameter set.
pub fn parametric_sep(model: &ParametricModel) -> Result<f64> {
    model.validate()?;
    let sep = match *model {
        ParametricModel::Gaussian { sigma } => sigma * sigma,
        ParametricModel::Gamma { theta, k } => {
            // Γ²(k) overflows past k ≈ 171, so stay in log space
            let exponent = 2.0 * theta.ln()
                + 2.0 * log_gamma(k)?
                + 2.0 * ((1.0 - k) * digamma(k)? + k)
                - (2.0 * PI * E).ln();
            exponent.exp()
        }
        ParametricModel::Weibull { lambda, k, .. } => {
            // (1 - α)² λ² e^{2αγ} e / (2π) with α = (k - 1)/k
            let alpha = (k - 1.0) / k;
            lambda * lambda * (2.0 * alpha * EULER_MASCHERONI + 1.0).exp() / (2.0 * PI * k * k)
        }
        ParametricModel::LogNormal { mu, sigma } => sigma * sigma * (2.0 * mu).exp(),
    };
    Ok(sep)
}

/// Closed-form Fisher information (location); Gamma and Weibull need k > 2.
pub fn parametric_fim(model: &ParametricModel) -> Result<f64> {
    model.validate()?;
    model.require_shape_above_two()?;
    let fim = match *model {
        ParametricModel::Gaussian { sigma } => 1.0 / (sigma * sigma),
        ParametricModel::Gamma { theta, k } => 1.0 / ((k - 2.0) * theta * theta),
        ParametricModel::Weibull { lambda, k, .. } => {
            // α² Γ(2α - 1) / ((1 - α)² λ²) = (k - 1)² Γ(1 - 2/k) / λ²
            (k - 1.0) * (k - 1.0) * gamma_fn(1.0 - 2.0 / k)? / (lambda * lambda)
        }
        ParametricModel::LogNormal { mu, sigma } => {
            (1.0 + 1.0 / (sigma * sigma)) * (2.0 * (sigma * sigma - mu)).exp()
        }
    };
    Ok(fim)
}

/// Closed-form (SEP, FIM, FSC) of a parametric model.
pub fn parametric_measures(model: &ParametricModel) -> Result<InfoTriple> {
    let fim = parametric_fim(model)?;
    let sep = parametric_sep(model)?;
    InfoTriple::new(sep, fim)
}

/// The complexity formula of each family evaluated on its own, without
/// going through SEP and FIM. Agreement with `parametric_measures(..).fsc()`
/// cross-checks the three formulas of each family against each other.
pub fn parametric_fsc_direct(model: &ParametricModel) -> Result<f64> {
    model.validate()?;
    model.require_shape_above_two()?;
    let fsc = match *model {
        ParametricModel::Gaussian { .. } => 1.0,
        ParametricModel::Gamma { k, .. } => {
            let exponent = 2.0 * log_gamma(k)? + 2.0 * ((1.0 - k) * digamma(k)? + k);
            exponent.exp() / (2.0 * PI * E * (k - 2.0))
        }
        ParametricModel::Weibull { k, .. } => {
            let alpha = (k - 1.0) / k;
            alpha * alpha * E * gamma_fn(2.0 * alpha - 1.0)? * (2.0 * alpha * EULER_MASCHERONI).exp()
                / (2.0 * PI)
        }
        ParametricModel::LogNormal { sigma, .. } => (1.0 + sigma * sigma) * (2.0 * sigma * sigma).exp(),
    };
    Ok(fsc)
}

/// Result of a non-parametric estimate on one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdeEstimate {
    pub bandwidth: Bandwidth,
    /// Differential entropy estimate (nats).
    pub entropy: f64,
    pub triple: InfoTriple,
}

fn entropy_integral(kde: &Kde<'_>) -> Result<f64> {
    let integrator = Integrator {
        abs_tol: 1e-13,
        ..Integrator::default()
    };
    let mut total = 0.0;
    for partition in kde_partitions(kde.sample(), kde.bandwidth()) {
        let est = integrator.integrate_partition(
            |x| {
                let f = kde.density(x);
                if f < DENSITY_FLOOR {
                    0.0
                } else {
                    -f * f.ln()
                }
            },
            &partition,
        )?;
        total += est.value;
    }
    Ok(total)
}

fn fisher_integral(kde: &Kde<'_>) -> Result<f64> {
    let integrator = Integrator::default();
    let mut total = 0.0;
    for partition in kde_partitions(kde.sample(), kde.bandwidth()) {
        let est = integrator.integrate_partition(
            |x| {
                let (f, df) = kde.density_and_derivative(x);
                if f < DENSITY_FLOOR {
                    0.0
                } else {
                    df * df / f
                }
            },
            &partition,
        )?;
        total += est.value;
    }
    Ok(total)
}

/// Entropy power from a differential entropy: exp(2H) / (2πe).
pub fn entropy_power(entropy: f64) -> f64 {
    (2.0 * entropy).exp() / (2.0 * PI * E)
}

/// Estimates entropy, SEP, FIM and FSC at a given bandwidth.
pub fn estimate_with_bandwidth(sample: &Sample, h: Bandwidth) -> Result<KdeEstimate> {
    let kde = Kde::new(sample, h);
    let entropy = entropy_integral(&kde)?;
    let fim = fisher_integral(&kde)?;
    let triple = InfoTriple::new(entropy_power(entropy), fim)?;
    Ok(KdeEstimate {
        bandwidth: h,
        entropy,
        triple,
    })
}

/// Estimates entropy, SEP, FIM and FSC with the plug-in bandwidth.
pub fn estimate(sample: &Sample) -> Result<KdeEstimate> {
    let h = sj_dpi_bandwidth(sample)?;
    estimate_with_bandwidth(sample, h)
}

/// −∫ f̂ log f̂ with the plug-in bandwidth.
pub fn entropy_estimate(sample: &Sample) -> Result<f64> {
    let h = sj_dpi_bandwidth(sample)?;
    entropy_integral(&Kde::new(sample, h))
}

pub fn sep_estimate(sample: &Sample) -> Result<f64> {
    entropy_estimate(sample).map(entropy_power)
}

pub fn fim_estimate(sample: &Sample) -> Result<f64> {
    let h = sj_dpi_bandwidth(sample)?;
    fisher_integral(&Kde::new(sample, h))
}

pub fn fsc_estimate(sample: &Sample) -> Result<f64> {
    estimate(sample).map(|e| e.triple.fsc())
}

/// A point of the Fisher-Shannon information plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsipPoint {
    pub sep: f64,
    pub fim: f64,
    /// Whether `sep · fim ≥ 1 - tol`.
    pub reachable: bool,
}

impl FsipPoint {
    pub fn new(sep: f64, fim: f64, tol: f64) -> Self {
        FsipPoint {
            sep,
            fim,
            reachable: sep > 0.0 && fim > 0.0 && sep * fim >= 1.0 - tol,
        }
    }

    pub fn complexity(&self) -> f64 {
        self.sep * self.fim
    }
}

pub fn fsip_point(triple: &InfoTriple, tol: f64) -> FsipPoint {
    FsipPoint::new(triple.sep(), triple.fim(), tol)
}

/// A pair `(sep, fim)` within a few ulps of `(sep, c / sep)` whose
/// floating-point product is exactly `c`. Falls back to `c / sep` if no
/// such pair is found nearby.
fn exact_pair(c: f64, sep: f64) -> (f64, f64) {
    let mut s = sep;
    for attempt in 0..16 {
        let fim = c / s;
        for f in [fim, fim.next_up(), fim.next_down(), fim.next_up().next_up(), fim.next_down().next_down()] {
            if s * f == c {
                return (s, f);
            }
        }
        // alternate outward: sep+1ulp, sep-1ulp, sep+2ulp, ...
        s = if attempt % 2 == 0 {
            let mut up = sep;
            for _ in 0..=attempt / 2 {
                up = up.next_up();
            }
            up
        } else {
            let mut down = sep;
            for _ in 0..=attempt / 2 {
                down = down.next_down();
            }
            down
        };
    }
    (sep, c / sep)
}

/// Log-spaced iso-complex curve `fim = c / sep` for `sep ∈ [sep_lo, sep_hi]`.
pub fn iso_complex_curve(c: f64, sep_lo: f64, sep_hi: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    if !c.is_finite() || c < 1.0 {
        return Err(Error::UnreachableComplexity(c));
    }
    if !(sep_lo > 0.0 && sep_lo < sep_hi && sep_hi.is_finite()) {
        return Err(Error::Config(format!(
            "iso-complex curve needs 0 < sep_lo < sep_hi, got [{sep_lo}, {sep_hi}]"
        )));
    }
    if points < 2 {
        return Err(Error::Config("iso-complex curve needs at least 2 points".into()));
    }
    let (log_lo, log_hi) = (sep_lo.ln(), sep_hi.ln());
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let sep = match i {
                0 => sep_lo,
                _ if i == points - 1 => sep_hi,
                _ => (log_lo + (log_hi - log_lo) * i as f64 / last).exp(),
            };
            exact_pair(c, sep)
        })
        .collect())
}

/// Finite-difference check of de Bruijn's identity for a Gaussian X and
/// Gaussian perturbation Z: returns the forward difference of
/// H(X + √t Z) at t = 0 and ½ σ_Z² I_X.
pub fn de_bruijn_check(model: &ParametricModel, sigma_z: f64, t_step: f64) -> Result<(f64, f64)> {
    let ParametricModel::Gaussian { sigma } = *model else {
        return Err(Error::Domain(format!(
            "de Bruijn check needs a Gaussian model, got {}",
            model.family()
        )));
    };
    model.validate()?;
    positive("sigma_z", sigma_z)?;
    positive("t_step", t_step)?;
    let var = sigma * sigma;
    let var_z = sigma_z * sigma_z;
    // H(t) - H(0) = ½ log((σ² + tσ_Z²)/σ²)
    let lhs = 0.5 * (t_step * var_z / var).ln_1p() / t_step;
    let rhs = 0.5 * var_z * parametric_fim(model)?;
    Ok((lhs, rhs))
}

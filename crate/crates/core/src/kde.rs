//! Gaussian kernel density estimation and the two-stage direct plug-in
//! bandwidth selector.
//!
//! Observations are kept sorted so that every kernel sum only visits points
//! within [`KERNEL_CUTOFF`] bandwidths of the evaluation point. Beyond that
//! distance `exp(-u²/2)` underflows to exactly zero, so the truncated sums
//! are identical to the full ones.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Standardized distance past which the Gaussian kernel is exactly zero in f64.
pub const KERNEL_CUTOFF: f64 = 40.0;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// A finite batch of real observations.
///
/// Construction rejects non-finite values, fewer than two points and
/// zero-spread samples. Observation order is not retained.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    sorted: Vec<f64>,
    std_dev: f64,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::DegenerateSample(format!(
                "at least 2 observations are required, got {}",
                values.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Data(format!("observation {i} is not finite ({v})")));
        }
        let mut sorted = values;
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mean = sorted.iter().sum::<f64>() / n;
        let ss: f64 = sorted.iter().map(|v| (v - mean) * (v - mean)).sum();
        let std_dev = (ss / (n - 1.0)).sqrt();
        if !(std_dev > 0.0) || sorted[0] == sorted[sorted.len() - 1] {
            return Err(Error::DegenerateSample("sample has zero variance".into()));
        }
        Ok(Sample { sorted, std_dev })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    /// Observations in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }

    /// Sample standard deviation (n - 1 denominator).
    pub fn std_dev(&self) -> f64 {
        self.std_dev
    }

    /// Linearly interpolated quantile (Hyndman-Fan type 7).
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        let pos = p * (self.sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        self.sorted[lo] + frac * (self.sorted[hi] - self.sorted[lo])
    }

    pub fn interquartile_range(&self) -> f64 {
        self.quantile(0.75) - self.quantile(0.25)
    }

    /// Indices `[start, end)` of observations within `radius` of `x`.
    fn neighbourhood(&self, x: f64, radius: f64) -> (usize, usize) {
        let start = self.sorted.partition_point(|&v| v < x - radius);
        let end = self.sorted.partition_point(|&v| v <= x + radius);
        (start, end.max(start))
    }

    /// Distinct values with their multiplicities, ascending.
    fn distinct_counts(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for &v in &self.sorted {
            match out.last_mut() {
                Some((last, count)) if *last == v => *count += 1.0,
                _ => out.push((v, 1.0)),
            }
        }
        out
    }
}

/// Kernel bandwidth, strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bandwidth(f64);

impl Bandwidth {
    pub fn new(h: f64) -> Result<Self> {
        if h.is_finite() && h > 0.0 {
            Ok(Bandwidth(h))
        } else {
            Err(Error::Domain(format!("bandwidth must be finite and positive, got {h}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Standard normal density.
#[inline]
pub fn gaussian_kernel(u: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * u * u).exp()
}

/// Fourth derivative of the standard normal density.
#[inline]
pub fn gaussian_kernel_d4(u: f64) -> f64 {
    let u2 = u * u;
    (u2 * u2 - 6.0 * u2 + 3.0) * gaussian_kernel(u)
}

/// Sixth derivative of the standard normal density.
#[inline]
pub fn gaussian_kernel_d6(u: f64) -> f64 {
    let u2 = u * u;
    (((u2 - 15.0) * u2 + 45.0) * u2 - 15.0) * gaussian_kernel(u)
}

/// Kernel density estimate of one sample at one bandwidth.
#[derive(Debug, Clone, Copy)]
pub struct Kde<'a> {
    sample: &'a Sample,
    h: f64,
}

impl<'a> Kde<'a> {
    pub fn new(sample: &'a Sample, h: Bandwidth) -> Self {
        Kde { sample, h: h.value() }
    }

    pub fn sample(&self) -> &'a Sample {
        self.sample
    }

    pub fn bandwidth(&self) -> Bandwidth {
        Bandwidth(self.h)
    }

    pub fn density(&self, x: f64) -> f64 {
        self.density_and_derivative(x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.density_and_derivative(x).1
    }

    /// `(f̂(x), f̂'(x))` from a single pass over the neighbouring points.
    pub fn density_and_derivative(&self, x: f64) -> (f64, f64) {
        let h = self.h;
        let (start, end) = self.sample.neighbourhood(x, KERNEL_CUTOFF * h);
        let mut sum = 0.0;
        let mut slope = 0.0;
        for &xi in &self.sample.sorted[start..end] {
            let u = (x - xi) / h;
            let k = (-0.5 * u * u).exp();
            sum += k;
            slope += u * k;
        }
        let norm = FRAC_1_SQRT_2PI / (self.sample.len() as f64 * h);
        (norm * sum, -norm * slope / h)
    }
}

/// f̂_h(x) for the Gaussian kernel.
pub fn density_at(sample: &Sample, h: Bandwidth, x: f64) -> f64 {
    Kde::new(sample, h).density(x)
}

/// f̂'_h(x) for the Gaussian kernel.
pub fn density_derivative_at(sample: &Sample, h: Bandwidth, x: f64) -> f64 {
    Kde::new(sample, h).derivative(x)
}

/// Kernel functional estimate ψ̂_r(g) = n⁻² g^(-r-1) ΣᵢΣⱼ K⁽ʳ⁾((Xᵢ - Xⱼ)/g),
/// diagonal terms included.
fn psi_functional(sample: &Sample, g: f64, order: u32, kernel: fn(f64) -> f64) -> f64 {
    let distinct = sample.distinct_counts();
    let reach = KERNEL_CUTOFF * g;
    let mut diagonal = 0.0;
    let mut off_diagonal = 0.0;
    for (a, &(va, ma)) in distinct.iter().enumerate() {
        diagonal += ma * ma;
        let mut row = 0.0;
        for &(vb, mb) in &distinct[a + 1..] {
            let d = vb - va;
            if d > reach {
                break;
            }
            row += mb * kernel(d / g);
        }
        off_diagonal += ma * row;
    }
    let total = diagonal * kernel(0.0) + 2.0 * off_diagonal;
    let n = sample.len() as f64;
    total / (n * n * g.powi(order as i32 + 1))
}

/// Two-stage direct plug-in bandwidth (Gaussian kernel, normal-scale start).
///
/// 1. σ̂ = min(sd, IQR/1.349), falling back to sd when the IQR is zero
/// 2. ψ̂₈ = 105 / (32 √π σ̂⁹)
/// 3. g₂ = [30 / (√(2π) ψ̂₈ n)]^(1/9), ψ̂₆ = ψ̂₆(g₂)
/// 4. g₁ = [-6 / (√(2π) ψ̂₆ n)]^(1/7), ψ̂₄ = ψ̂₄(g₁)
/// 5. h = [1 / (2 √π ψ̂₄ n)]^(1/5)
pub fn sj_dpi_bandwidth(sample: &Sample) -> Result<Bandwidth> {
    let n = sample.len() as f64;
    let sd = sample.std_dev();
    let iqr_scale = sample.interquartile_range() / 1.349;
    let scale = if iqr_scale > 0.0 { sd.min(iqr_scale) } else { sd };

    let sqrt_pi = PI.sqrt();
    let sqrt_2pi = (2.0 * PI).sqrt();

    let psi8 = 105.0 / (32.0 * sqrt_pi * scale.powi(9));
    let g2 = (30.0 / (sqrt_2pi * psi8 * n)).powf(1.0 / 9.0);
    let psi6 = psi_functional(sample, g2, 6, gaussian_kernel_d6);
    if !(psi6 < 0.0) || !psi6.is_finite() {
        return Err(Error::Bandwidth(format!("estimated psi6 = {psi6} is not negative")));
    }
    let g1 = (-6.0 / (sqrt_2pi * psi6 * n)).powf(1.0 / 7.0);
    let psi4 = psi_functional(sample, g1, 4, gaussian_kernel_d4);
    if !(psi4 > 0.0) || !psi4.is_finite() {
        return Err(Error::Bandwidth(format!("estimated psi4 = {psi4} is not positive")));
    }
    let h = (1.0 / (2.0 * sqrt_pi * psi4 * n)).powf(0.2);
    Bandwidth::new(h).map_err(|_| Error::Bandwidth(format!("plug-in bandwidth {h} is not usable")))
}

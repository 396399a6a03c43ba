//! Globally adaptive 21-point Gauss-Kronrod integration.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error estimate drops below `max(abs_tol, rel_tol * |integral|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::kde::{Bandwidth, Sample};

/// Default relative tolerance for [`integrate`].
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Half-width of the KDE support window, in bandwidths.
pub const SUPPORT_HALF_WIDTH: f64 = 10.0;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// 21-point Kronrod rule with the embedded 10-point Gauss rule.
fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = WGK[10] * f_center;
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut values = [(0.0, 0.0); 10];
    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        *slot = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (f_center - mean).abs();
    for (j, &(f1, f2)) in values.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (1.0f64).min((200.0 * error / asc).powf(1.5));
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    Segment { a, b, value, error }
}

/// An integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Adaptive integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections on top of the initial partition.
    pub max_subdivisions: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: 0.0,
            max_subdivisions: 20_000,
        }
    }
}

impl Integrator {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Integrator {
            rel_tol,
            ..Default::default()
        }
    }

    /// ∫ₐᵇ f.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Estimate> {
        self.integrate_partition(f, &[a, b])
    }

    /// Integral over the consecutive intervals of an ascending partition
    /// `[p₀, p₁, ..., pₘ]`. Breakpoints let the caller place nodes near
    /// features the integrand would otherwise hide from the initial rule.
    pub fn integrate_partition<F: Fn(f64) -> f64>(&self, f: F, points: &[f64]) -> Result<Estimate> {
        if points.len() < 2 {
            return Err(Error::Config("integration needs at least two breakpoints".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("integration limits must be finite".into()));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain("integration breakpoints must be strictly increasing".into()));
        }
        if !(self.rel_tol > 0.0) && !(self.abs_tol > 0.0) {
            return Err(Error::Config("tolerance must be positive".into()));
        }

        let mut heap = BinaryHeap::with_capacity(points.len() * 2);
        let mut done: Vec<Segment> = Vec::new();
        let mut total = 0.0;
        let mut total_err = 0.0;
        for w in points.windows(2) {
            let s = gauss_kronrod_21(&f, w[0], w[1]);
            if !s.value.is_finite() {
                return Err(Error::Domain(format!("integrand not finite on [{}, {}]", w[0], w[1])));
            }
            total += s.value;
            total_err += s.error;
            heap.push(s);
        }

        let mut splits = 0usize;
        loop {
            if total_err <= self.abs_tol.max(self.rel_tol * total.abs()) {
                break;
            }
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if !(worst.a < mid && mid < worst.b) || (worst.b - worst.a) < 1e-14 * worst.a.abs().max(worst.b.abs()) {
                // cannot be refined further in floating point
                done.push(worst);
                continue;
            }
            if splits >= self.max_subdivisions {
                heap.push(worst);
                break;
            }
            splits += 1;
            let left = gauss_kronrod_21(&f, worst.a, mid);
            let right = gauss_kronrod_21(&f, mid, worst.b);
            if !left.value.is_finite() || !right.value.is_finite() {
                return Err(Error::Domain(format!(
                    "integrand not finite on [{}, {}]",
                    worst.a, worst.b
                )));
            }
            total += left.value + right.value - worst.value;
            total_err += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
            // periodically resum to stop drift in the running totals
            if splits % 256 == 0 {
                let (t, e) = heap
                    .iter()
                    .chain(done.iter())
                    .fold((0.0, 0.0), |(t, e), s| (t + s.value, e + s.error));
                total = t;
                total_err = e;
            }
        }

        let mut segments: Vec<Segment> = heap.into_vec();
        segments.extend(done);
        segments.sort_by(|x, y| x.a.total_cmp(&y.a));
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= self.abs_tol.max(self.rel_tol * value.abs()) {
            Ok(Estimate { value, error })
        } else {
            Err(Error::Quadrature {
                estimate: value,
                error_bound: error,
            })
        }
    }
}

/// Adaptive estimate of ∫ₐᵇ f with relative tolerance `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Domain(format!("integration requires a < b, got [{a}, {b}]")));
    }
    Integrator::with_rel_tol(rel_tol).integrate(f, a, b).map(|e| e.value)
}

/// `[min - 10h, max + 10h]`: the window outside which a Gaussian KDE holds
/// less than Φ(-10) of its mass.
pub fn support_window(sample: &Sample, h: Bandwidth) -> (f64, f64) {
    let reach = SUPPORT_HALF_WIDTH * h.value();
    (sample.min() - reach, sample.max() + reach)
}

/// Breakpoints covering every observation's ±10h neighbourhood, with
/// pieces no wider than `2h`.
///
/// Returns one ascending partition per connected cluster. Stretches of the
/// support window farther than 10h from every observation are left out;
/// there the estimate is bounded by the same Gaussian tail as outside the
/// window.
pub fn kde_partitions(sample: &Sample, h: Bandwidth) -> Vec<Vec<f64>> {
    let h = h.value();
    let reach = SUPPORT_HALF_WIDTH * h;
    let mut clusters: Vec<(f64, f64)> = Vec::new();
    for &v in sample.values() {
        let (lo, hi) = (v - reach, v + reach);
        match clusters.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => clusters.push((lo, hi)),
        }
    }
    clusters
        .into_iter()
        .map(|(lo, hi)| {
            let pieces = ((hi - lo) / (2.0 * h)).ceil().max(1.0) as usize;
            let step = (hi - lo) / pieces as f64;
            let mut points: Vec<f64> = (0..pieces).map(|i| lo + step * i as f64).collect();
            points.push(hi);
            points.dedup();
            points
        })
        .collect()
}

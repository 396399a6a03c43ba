//! Moving-window evaluation of the Fisher-Shannon measures along an index
//! (time, or a control parameter shared by many samples).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kde::{Bandwidth, Sample};
use crate::measures::{estimate, InfoTriple};

/// Default minimum number of points for a window to be evaluated.
pub const DEFAULT_MIN_POINTS: usize = 30;

/// Slack, in strides, when deciding whether a last window still fits.
const FIT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    /// Strictly increasing index (timestamps).
    Time,
    /// Non-decreasing index; many observations may share one value.
    Parameter,
}

/// Index-stamped observations.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    index: Vec<f64>,
    values: Vec<f64>,
    kind: IndexKind,
}

impl TimeSeries {
    pub fn new(index: Vec<f64>, values: Vec<f64>, kind: IndexKind) -> Result<Self> {
        if index.len() != values.len() {
            return Err(Error::Data(format!(
                "index has {} entries but values has {}",
                index.len(),
                values.len()
            )));
        }
        if index.len() < 2 {
            return Err(Error::Data(format!(
                "a series needs at least 2 observations, got {}",
                index.len()
            )));
        }
        if let Some(i) = index.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("index entry {i} is not finite")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("value {i} is not finite")));
        }
        let bad = match kind {
            IndexKind::Time => index.windows(2).position(|w| !(w[0] < w[1])),
            IndexKind::Parameter => index.windows(2).position(|w| !(w[0] <= w[1])),
        };
        if let Some(i) = bad {
            let rule = match kind {
                IndexKind::Time => "strictly increasing",
                IndexKind::Parameter => "non-decreasing",
            };
            return Err(Error::Data(format!(
                "index must be {rule}: entry {} ({}) follows {}",
                i + 1,
                index[i + 1],
                index[i]
            )));
        }
        Ok(TimeSeries { index, values, kind })
    }

    pub fn time_indexed(index: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(index, values, IndexKind::Time)
    }

    pub fn parameter_indexed(index: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(index, values, IndexKind::Parameter)
    }

    pub fn index(&self) -> &[f64] {
        &self.index
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> IndexKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn span(&self) -> f64 {
        self.index[self.index.len() - 1] - self.index[0]
    }

    /// Positions `[start, end)` with index in `[lo, hi)`.
    pub fn range(&self, lo: f64, hi: f64) -> (usize, usize) {
        let start = self.index.partition_point(|&t| t < lo);
        let end = self.index.partition_point(|&t| t < hi);
        (start, end.max(start))
    }
}

/// Window geometry in index units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    pub width: f64,
    pub stride: f64,
    pub min_points: usize,
}

impl WindowSpec {
    pub fn new(width: f64, stride: f64, min_points: usize) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::Config(format!("window width must be positive, got {width}")));
        }
        if !(stride.is_finite() && stride > 0.0) {
            return Err(Error::Config(format!("window stride must be positive, got {stride}")));
        }
        if min_points < 2 {
            return Err(Error::Config(format!("min_points must be at least 2, got {min_points}")));
        }
        Ok(WindowSpec {
            width,
            stride,
            min_points,
        })
    }

    /// Adjacent windows share points.
    pub fn is_overlapping(&self) -> bool {
        self.stride < self.width
    }

    /// `floor((span - width) / stride) + 1`, or 0 when the span is shorter
    /// than one window.
    pub fn window_count(&self, span: f64) -> usize {
        if span + FIT_SLACK * self.stride < self.width {
            return 0;
        }
        ((span - self.width) / self.stride + FIT_SLACK).floor() as usize + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowStatus {
    Ok,
    SkippedInsufficient,
    SkippedDegenerate,
}

impl WindowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            WindowStatus::Ok => "ok",
            WindowStatus::SkippedInsufficient => "skipped_insufficient",
            WindowStatus::SkippedDegenerate => "skipped_degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowResult {
    pub window_lo: f64,
    pub window_hi: f64,
    pub center: f64,
    pub n_points: usize,
    /// Present only for `Ok` windows.
    pub bandwidth: Option<Bandwidth>,
    pub triple: Option<InfoTriple>,
    pub status: WindowStatus,
}

fn evaluate_window(values: &[f64], lo: f64, hi: f64, min_points: usize) -> Result<WindowResult> {
    let mut result = WindowResult {
        window_lo: lo,
        window_hi: hi,
        center: 0.5 * (lo + hi),
        n_points: values.len(),
        bandwidth: None,
        triple: None,
        status: WindowStatus::SkippedInsufficient,
    };
    if values.len() < min_points {
        return Ok(result);
    }
    let sample = match Sample::from_slice(values) {
        Ok(s) => s,
        Err(Error::DegenerateSample(_)) => {
            result.status = WindowStatus::SkippedDegenerate;
            return Ok(result);
        }
        Err(e) => return Err(e),
    };
    match estimate(&sample) {
        Ok(est) => {
            result.bandwidth = Some(est.bandwidth);
            result.triple = Some(est.triple);
            result.status = WindowStatus::Ok;
        }
        Err(Error::Bandwidth(_)) => result.status = WindowStatus::SkippedDegenerate,
        Err(e) => return Err(e),
    }
    Ok(result)
}

/// Windows `[lo, lo + width)` with `lo = index_min + k·stride`, evaluated
/// independently (in parallel) and returned in ascending `lo`.
pub fn windowed_measures(series: &TimeSeries, spec: &WindowSpec) -> Result<Vec<WindowResult>> {
    let count = spec.window_count(series.span());
    if count == 0 {
        return Err(Error::Config(format!(
            "series span {} is shorter than one window of width {}",
            series.span(),
            spec.width
        )));
    }
    let origin = series.index()[0];
    (0..count)
        .into_par_iter()
        .map(|k| {
            let lo = origin + k as f64 * spec.stride;
            let hi = lo + spec.width;
            let (start, end) = series.range(lo, hi);
            evaluate_window(&series.values()[start..end], lo, hi, spec.min_points)
        })
        .collect()
}

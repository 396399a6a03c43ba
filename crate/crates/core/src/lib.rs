//! Fisher-Shannon analysis of time series.
//!
//! * [`special`]: gamma, log-gamma and digamma
//! * [`kde`]: Gaussian kernel density estimation and plug-in bandwidth
//! * [`quadrature`]: adaptive one-dimensional integration
//! * [`measures`]: entropy power, Fisher information, complexity, and the
//!   Fisher-Shannon information plane
//! * [`windows`]: moving-window evaluation along time or a control parameter
//! * [`dynamics`]: logistic map, noise injection and Lyapunov exponents

pub mod dynamics;
pub mod error;
pub mod kde;
pub mod measures;
pub mod quadrature;
pub mod special;
pub mod windows;

pub use error::{Error, Result};
pub use kde::{sj_dpi_bandwidth, Bandwidth, Sample};
pub use measures::{
    estimate, estimate_with_bandwidth, parametric_measures, FsipPoint, InfoTriple, KdeEstimate,
    ParametricModel,
};
pub use windows::{windowed_measures, TimeSeries, WindowResult, WindowSpec, WindowStatus};

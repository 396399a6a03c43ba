//! Command-line front end for Fisher-Shannon analysis.
//!
//! Exit codes: 0 success, 2 configuration, 3 parse or data, 4 numerical or
//! domain, 5 quadrature non-convergence.

pub mod config;
pub mod error;
pub mod io;

use std::ffi::OsString;

use clap::Parser;
use fisher_shannon::dynamics::{bifurcation_sweep, Lyapunov};
use fisher_shannon::measures::iso_complex_curve;
use fisher_shannon::{
    estimate, estimate_with_bandwidth, parametric_measures, windowed_measures, Sample, WindowResult,
};

pub use config::{Cli, Command, RunConfig, SweepParams};
pub use error::{CliError, Result};
pub use io::ingest_csv;
use io::{format_number, format_optional, Output};

pub const WINDOW_HEADER: [&str; 9] = [
    "window_lo",
    "window_hi",
    "center",
    "n_points",
    "bandwidth",
    "sep",
    "fim",
    "fsc",
    "status",
];
pub const SWEEP_EXTRA_HEADER: [&str; 2] = ["lyapunov", "noise_variance"];
pub const PARAMETRIC_HEADER: [&str; 3] = ["sep", "fim", "fsc"];
pub const ESTIMATE_HEADER: [&str; 6] = ["n", "bandwidth", "entropy", "sep", "fim", "fsc"];
pub const FSIP_HEADER: [&str; 4] = ["sep", "fim", "complexity", "kind"];

fn window_fields(w: &WindowResult) -> Vec<String> {
    vec![
        format_number(w.window_lo),
        format_number(w.window_hi),
        format_number(w.center),
        w.n_points.to_string(),
        format_optional(w.bandwidth.map(|h| h.value())),
        format_optional(w.triple.map(|t| t.sep())),
        format_optional(w.triple.map(|t| t.fim())),
        format_optional(w.triple.map(|t| t.fsc())),
        w.status.as_str().to_string(),
    ]
}

/// Mean Lyapunov exponent of the grid values inside `[lo, hi)`. Superstable
/// parameters are left out; `None` if nothing finite remains.
pub fn window_lyapunov(lyapunov: &[(f64, Lyapunov)], lo: f64, hi: f64) -> Option<f64> {
    let finite: Vec<f64> = lyapunov
        .iter()
        .filter(|(c, _)| *c >= lo && *c < hi)
        .filter_map(|(_, l)| l.value())
        .collect();
    if finite.is_empty() {
        None
    } else {
        Some(finite.iter().sum::<f64>() / finite.len() as f64)
    }
}

fn write_windows(out: &mut Output, windows: &[WindowResult]) {
    out.record(WINDOW_HEADER);
    for w in windows {
        out.record(window_fields(w));
    }
}

fn run_logistic(out: &mut Output, sweep: &SweepParams, window: &fisher_shannon::WindowSpec) -> Result<()> {
    let result = bifurcation_sweep(
        sweep.c_lo,
        sweep.c_hi,
        sweep.c_step,
        &sweep.template,
        sweep.noise_variance,
        sweep.seed,
    )?;
    let windows = windowed_measures(&result.series, window)?;
    out.record(WINDOW_HEADER.iter().chain(&SWEEP_EXTRA_HEADER));
    for w in &windows {
        let mut fields = window_fields(w);
        fields.push(format_optional(window_lyapunov(&result.lyapunov, w.window_lo, w.window_hi)));
        fields.push(format_number(result.noise_variance));
        out.record(fields);
    }
    Ok(())
}

/// Executes a validated configuration, writing its CSV output.
pub fn run(config: &RunConfig) -> Result<()> {
    let mut out = Output::new(config.output.as_deref());
    match &config.command {
        Command::Analyze { input, window } => {
            let series = ingest_csv(input)?;
            let windows = windowed_measures(&series, window)?;
            write_windows(&mut out, &windows);
        }
        Command::Logistic { sweep, window } => run_logistic(&mut out, sweep, window)?,
        Command::Parametric { model } => {
            let t = parametric_measures(model)?;
            out.record(PARAMETRIC_HEADER);
            out.record([t.sep(), t.fim(), t.fsc()].map(format_number));
        }
        Command::Estimate { input, bandwidth } => {
            let series = ingest_csv(input)?;
            let sample = Sample::from_slice(series.values())?;
            let est = match bandwidth {
                Some(h) => estimate_with_bandwidth(&sample, *h)?,
                None => estimate(&sample)?,
            };
            out.record(ESTIMATE_HEADER);
            out.record([
                sample.len().to_string(),
                format_number(est.bandwidth.value()),
                format_number(est.entropy),
                format_number(est.triple.sep()),
                format_number(est.triple.fim()),
                format_number(est.triple.fsc()),
            ]);
        }
        Command::Fsip {
            complexities,
            sep_lo,
            sep_hi,
            points,
            input,
        } => {
            let plane_points = input.as_deref().map(io::read_plane_points).transpose()?;
            let mut curves = Vec::with_capacity(complexities.len());
            for &c in complexities {
                curves.push((c, iso_complex_curve(c, *sep_lo, *sep_hi, *points)?));
            }
            out.record(FSIP_HEADER);
            for (c, curve) in curves {
                for (sep, fim) in curve {
                    out.record([format_number(sep), format_number(fim), format_number(c), "curve".into()]);
                }
            }
            for (sep, fim) in plane_points.unwrap_or_default() {
                out.record([
                    format_number(sep),
                    format_number(fim),
                    format_number(sep * fim),
                    "point".into(),
                ]);
            }
        }
    }
    out.finish()
}

/// Parses arguments, runs, reports any error on one stderr line and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { error::EXIT_CONFIG } else { error::EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match RunConfig::try_from(cli).and_then(|config| run(&config)) {
        Ok(()) => error::EXIT_OK,
        Err(e) => {
            eprintln!("fisher-shannon: {e}");
            e.exit_code()
        }
    }
}

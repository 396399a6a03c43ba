use std::io::{self, Write};
use std::path::{Path, PathBuf};

use fisher_shannon::{Error, TimeSeries};

use crate::error::{CliError, Result};

fn io_error(path: &Path, err: impl std::fmt::Display) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        message: err.to_string(),
    }
}

/// Reads a two-column CSV whose first non-comment line is a header. Lines
/// starting with `#` and blank lines are skipped. Each pair of values comes
/// with its 1-based line number in the file.
fn read_pairs(path: &Path) -> Result<Vec<(u64, f64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let parse_error = |line: u64, message: String| CliError::Parse {
        path: path.display().to_string(),
        line,
        message,
    };
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(parse_error(line, format!("expected 2 fields, found {}", fields.len())));
        }
        if !header_seen {
            header_seen = true;
            continue;
        }
        let number = |f: &str| {
            f.parse::<f64>()
                .map_err(|_| parse_error(line, format!("cannot parse {f:?} as a number")))
        };
        rows.push((line, number(fields[0])?, number(fields[1])?));
    }
    Ok(rows)
}

/// Parses an `index,value` CSV into a time-indexed series.
pub fn ingest_csv(path: &Path) -> Result<TimeSeries> {
    let rows = read_pairs(path)?;
    if rows.is_empty() {
        return Err(Error::Data(format!("{}: no data rows", path.display())).into());
    }
    if let Some(w) = rows.windows(2).find(|w| !(w[0].1 < w[1].1)) {
        return Err(Error::Data(format!(
            "{}: line {}: index {} does not exceed the previous index {}",
            path.display(),
            w[1].0,
            w[1].1,
            w[0].1
        ))
        .into());
    }
    let (index, values) = rows.into_iter().map(|(_, t, v)| (t, v)).unzip();
    Ok(TimeSeries::time_indexed(index, values)?)
}

/// Parses a `sep,fim` CSV of points for the information plane.
pub fn read_plane_points(path: &Path) -> Result<Vec<(f64, f64)>> {
    Ok(read_pairs(path)?.into_iter().map(|(_, s, f)| (s, f)).collect())
}

/// Shortest decimal form that parses back to the same double.
pub fn format_number(x: f64) -> String {
    format!("{x}")
}

pub fn format_optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// CSV sink, buffered in memory and written out by [`Output::finish`] to
/// a file, or to standard output when no path is given. Failed runs leave
/// no partial file behind.
pub struct Output {
    buffer: String,
    path: Option<PathBuf>,
}

impl Output {
    pub fn new(path: Option<&Path>) -> Self {
        Output {
            buffer: String::new(),
            path: path.map(Path::to_path_buf),
        }
    }

    pub fn record<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for (i, field) in fields.into_iter().enumerate() {
            if i > 0 {
                self.buffer.push(',');
            }
            self.buffer.push_str(field.as_ref());
        }
        self.buffer.push('\n');
    }

    pub fn finish(self) -> Result<()> {
        match &self.path {
            Some(p) => std::fs::write(p, &self.buffer).map_err(|e| io_error(p, e)),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(self.buffer.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| io_error(Path::new("<stdout>"), e))
            }
        }
    }
}

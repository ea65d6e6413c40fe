//! File formats for the `bifree` command-line tool.
//!
//! CDFs are stored as JSON. Bivariate files carry `x_breaks`, `y_breaks` and
//! `cdf` (row `i` holds the values at `x_breaks[i]` across `y_breaks`);
//! univariate files carry `breaks` and `values`. Numbers are written with 17
//! significant digits so a write followed by a read is bit-exact. Samples are
//! read from TSV, one `x<TAB>y` pair per line.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use bifree_core::{BivariateCdf, CdfError, UnivariateCdf};
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

#[derive(Debug)]
pub enum CliError {
    Io { path: PathBuf, source: io::Error },
    Parse { path: PathBuf, message: String },
    /// Well-formed input that the mathematics rejects.
    Domain(String),
}

impl CliError {
    /// Process exit status: 1 for domain failures, 2 for IO and parse errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io { .. } | CliError::Parse { .. } => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Parse { path, message } => write!(f, "{}: {message}", path.display()),
            CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CliError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl From<CdfError> for CliError {
    fn from(e: CdfError) -> Self {
        CliError::Domain(e.to_string())
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BivariateFile {
    x_breaks: Vec<f64>,
    y_breaks: Vec<f64>,
    cdf: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnivariateFile {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

/// Writes every float as `d.dddddddddddddddde±x`.
struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", format_f64(value))
    }
}

/// 17 significant digits in scientific notation; reads back to the same bits.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value.serialize(&mut ser).expect("in-memory serialization");
    out.push(b'\n');
    out
}

fn from_json<'a, T: Deserialize<'a>>(path: &Path, text: &'a str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Structural errors (ragged rows, unsorted breaks) are parse failures;
/// axiom violations are left to validation.
fn shape_error(path: &Path, e: CdfError) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

pub fn bivariate_to_json(f: &BivariateCdf) -> Vec<u8> {
    to_json(&BivariateFile {
        x_breaks: f.x_breaks().to_vec(),
        y_breaks: f.y_breaks().to_vec(),
        cdf: f.rows().map(<[f64]>::to_vec).collect(),
    })
}

pub fn univariate_to_json(f: &UnivariateCdf) -> Vec<u8> {
    to_json(&UnivariateFile {
        breaks: f.breaks().to_vec(),
        values: f.values().to_vec(),
    })
}

pub fn parse_bivariate(path: &Path, text: &str) -> Result<BivariateCdf, CliError> {
    let file: BivariateFile = from_json(path, text)?;
    BivariateCdf::from_rows(file.x_breaks, file.y_breaks, &file.cdf).map_err(|e| shape_error(path, e))
}

pub fn parse_univariate(path: &Path, text: &str) -> Result<UnivariateCdf, CliError> {
    let file: UnivariateFile = from_json(path, text)?;
    UnivariateCdf::new(file.breaks, file.values).map_err(|e| shape_error(path, e))
}

pub fn read_bivariate(path: &Path) -> Result<BivariateCdf, CliError> {
    parse_bivariate(path, &read_text(path)?)
}

pub fn read_univariate(path: &Path) -> Result<UnivariateCdf, CliError> {
    parse_univariate(path, &read_text(path)?)
}

pub fn write_bivariate(path: &Path, f: &BivariateCdf) -> Result<(), CliError> {
    write_bytes(path, &bivariate_to_json(f))
}

pub fn write_univariate(path: &Path, f: &UnivariateCdf) -> Result<(), CliError> {
    write_bytes(path, &univariate_to_json(f))
}

/// `x<TAB>y` lines; blank lines and lines starting with `#` are skipped.
pub fn parse_samples(path: &Path, text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let bad = |line: usize, what: &str| CliError::Parse {
        path: path.to_path_buf(),
        message: format!("line {line}: {what}"),
    };
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(x), Some(y), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(bad(k + 1, "expected two tab-separated fields"));
        };
        let x: f64 = x.trim().parse().map_err(|_| bad(k + 1, "x is not a number"))?;
        let y: f64 = y.trim().parse().map_err(|_| bad(k + 1, "y is not a number"))?;
        out.push((x, y));
    }
    Ok(out)
}

pub fn read_samples(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    parse_samples(path, &read_text(path)?)
}

/// One `x<TAB>y<TAB>F` row per grid point in row-major order.
pub fn plot_rows(f: &BivariateCdf) -> String {
    let mut out = String::new();
    for (i, &x) in f.x_breaks().iter().enumerate() {
        for (j, &y) in f.y_breaks().iter().enumerate() {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                format_f64(x),
                format_f64(y),
                format_f64(f.value(i, j))
            ));
        }
    }
    out
}

//! File emission: atomic writes, bit-stable CSV and JSON.
//!
//! Floats are written with Rust's shortest round-trip formatting and `.` as
//! the decimal separator; lines end with LF. Writes go to a temporary file
//! in the target directory followed by a rename, so readers never observe
//! a half-written file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use stochmap::analytics::{Histogram, SweepResult, TailFit, TailMethod};

use crate::CliError;

pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(io)?;
        }
    }
    let mut tmp: PathBuf = path.to_path_buf();
    let mut name = path
        .file_name()
        .ok_or_else(|| CliError::Io(format!("{} has no file name", path.display())))?
        .to_os_string();
    name.push(".tmp");
    tmp.set_file_name(name);
    fs::write(&tmp, bytes).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)?;
    Ok(())
}

pub fn histogram_csv(hist: &Histogram) -> String {
    let mut out = String::from("bin_left,bin_right,density,count\n");
    for (i, &count) in hist.counts.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            hist.edges[i],
            hist.edges[i + 1],
            hist.density[i],
            count
        ));
    }
    out
}

pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut out = String::from("lambda,order_parameter,variance,lyapunov\n");
    for i in 0..sweep.lambda_grid.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            sweep.lambda_grid[i], sweep.order_parameter[i], sweep.variance[i], sweep.lyapunov[i]
        ));
    }
    out
}

/// Raw samples, one value per line.
pub fn samples_text(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 20);
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    out
}

/// None for non-finite values, which JSON cannot carry.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Serialize)]
pub struct SummaryJson {
    pub regime: &'static str,
    pub lambda: Option<f64>,
    pub n: Option<f64>,
    pub seed: u64,
    pub count: usize,
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SweepJson {
    pub lambda_c_lyapunov: f64,
    pub lambda_c_order: f64,
    pub mean_log_one_plus_eps: f64,
    pub order_threshold: f64,
}

#[derive(Debug, Serialize)]
pub struct FitJson {
    pub exponent: f64,
    pub xmin: f64,
    pub stderr: f64,
    pub n_tail: usize,
    pub method: &'static str,
}

impl From<&TailFit> for FitJson {
    fn from(fit: &TailFit) -> Self {
        FitJson {
            exponent: fit.exponent,
            xmin: fit.xmin,
            stderr: fit.stderr,
            n_tail: fit.n_tail,
            method: match fit.method {
                TailMethod::Hill => "hill",
                TailMethod::LogLogRegression => "loglog_regression",
            },
        }
    }
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| CliError::Io(format!("cannot serialize JSON: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

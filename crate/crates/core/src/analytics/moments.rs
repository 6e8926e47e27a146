//! Two-pass central moments with bias-corrected shape statistics.

use super::{ensure_finite, pairwise_map_sum, pairwise_sum};
use crate::error::{Error, Result};

/// Count, mean, unbiased variance, and bias-corrected sample skewness /
/// excess kurtosis. Shape statistics are NaN below their minimum counts
/// (3 and 4) or for zero-variance data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

pub fn moments(samples: &[f64]) -> Result<MomentSummary> {
    ensure_finite(samples)?;
    let n = samples.len();
    if n < 2 {
        return Err(Error::TooFewSamples {
            what: "moments",
            needed: 2,
            got: n,
        });
    }
    let nf = n as f64;
    let mean = pairwise_sum(samples) / nf;
    let m2 = pairwise_map_sum(samples, &|x| (x - mean).powi(2)) / nf;
    let m3 = pairwise_map_sum(samples, &|x| (x - mean).powi(3)) / nf;
    let m4 = pairwise_map_sum(samples, &|x| (x - mean).powi(4)) / nf;

    let variance = m2 * nf / (nf - 1.0);

    let skewness = if n >= 3 && m2 > 0.0 {
        let g1 = m3 / m2.powf(1.5);
        g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0)
    } else {
        f64::NAN
    };
    let excess_kurtosis = if n >= 4 && m2 > 0.0 {
        let g2 = m4 / (m2 * m2) - 3.0;
        ((nf + 1.0) * g2 + 6.0) * (nf - 1.0) / ((nf - 2.0) * (nf - 3.0))
    } else {
        f64::NAN
    };

    Ok(MomentSummary {
        count: n,
        mean,
        variance,
        skewness,
        excess_kurtosis,
    })
}

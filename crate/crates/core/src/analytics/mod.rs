//! Estimators over immutable sample buffers: densities, moments, tail
//! exponents, phase-transition diagnostics, and normality checks.
//!
//! All reductions run in a fixed pairwise order, so results do not depend
//! on thread count or scheduling.

mod ensemble;
mod histogram;
mod locus;
mod moments;
mod sweep;
mod tail;

pub use ensemble::{
    ensemble_checkpoints, normality_check, variance_growth, InitialCondition, NoiseSharing,
    NormalitySummary,
};
pub use histogram::{histogram, Binning, Histogram};
pub use locus::{conditional_density_locus, locus_slope, LocusPoint};
pub use moments::{moments, MomentSummary};
pub use sweep::{
    estimate_critical_lambda, mean_log_one_plus_eps_estimate, sweep_lambda, CriticalEstimate,
    SweepResult, LAMBDA_C_PRECISION, ORDER_THRESHOLD,
};
pub use tail::{fit_tail, straight_span_decades, TailFit, TailMethod, XminRule};

/// Pairwise (cascade) sum of `f(x)` over the slice: fixed association
/// order, O(log n) rounding growth.
pub(crate) fn pairwise_map_sum<F>(xs: &[f64], f: &F) -> f64
where
    F: Fn(f64) -> f64,
{
    if xs.len() <= 64 {
        return xs.iter().map(|&x| f(x)).sum();
    }
    let mid = xs.len() / 2;
    pairwise_map_sum(&xs[..mid], f) + pairwise_map_sum(&xs[mid..], f)
}

pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    pairwise_map_sum(xs, &|x| x)
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

/// Least squares y = a + b·x with the slope's standard error.
pub(crate) struct LineFit {
    pub slope: f64,
    #[allow(dead_code)]
    pub intercept: f64,
    pub slope_stderr: f64,
}

pub(crate) fn fit_line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    fit_line_weighted(x, y, None)
}

/// Weighted least squares; `weights` of None means equal weights.
pub(crate) fn fit_line_weighted(x: &[f64], y: &[f64], weights: Option<&[f64]>) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    let wsum: f64 = (0..n).map(&w).sum();
    if wsum <= 0.0 {
        return None;
    }
    let mx = (0..n).map(|i| w(i) * x[i]).sum::<f64>() / wsum;
    let my = (0..n).map(|i| w(i) * y[i]).sum::<f64>() / wsum;
    let sxx: f64 = (0..n).map(|i| w(i) * (x[i] - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = (0..n).map(|i| w(i) * (x[i] - mx) * (y[i] - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if n > 2 {
        let ss_res: f64 = (0..n)
            .map(|i| w(i) * (y[i] - intercept - slope * x[i]).powi(2))
            .sum();
        (ss_res / (n - 2) as f64 / sxx).sqrt()
    } else {
        f64::NAN
    };
    Some(LineFit {
        slope,
        intercept,
        slope_stderr: stderr,
    })
}

/// Nearest-rank quantile of an unsorted slice (q in (0, 1)).
pub(crate) fn quantile(xs: &[f64], q: f64) -> f64 {
    debug_assert!(!xs.is_empty() && (0.0..1.0).contains(&q));
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let idx = ((q * sorted.len() as f64).ceil() as usize)
        .saturating_sub(1)
        .min(sorted.len() - 1);
    sorted[idx]
}

pub(crate) fn ensure_finite(samples: &[f64]) -> crate::error::Result<()> {
    if samples.is_empty() {
        return Err(crate::error::Error::EmptySamples);
    }
    for &x in samples {
        if !x.is_finite() {
            return Err(crate::error::Error::NonFiniteSample(x));
        }
    }
    Ok(())
}

//! Power-law tail fitting: Hill's maximum-likelihood estimator and a
//! log-log regression over a log-binned density.

use super::histogram::{histogram, Binning, Histogram};
use super::{ensure_finite, fit_line, quantile};
use crate::error::{Error, Result};

/// Minimum number of tail samples for a fit.
pub const MIN_TAIL: usize = 10;

/// Log-binned regression resolution: at least this many bins per decade.
const BINS_PER_DECADE: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMethod {
    Hill,
    LogLogRegression,
}

/// Where the tail begins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XminRule {
    /// Tail above the given quantile of the pooled samples. The default
    /// protocol uses the 90th percentile.
    Quantile(f64),
    Fixed(f64),
}

impl XminRule {
    pub const DEFAULT: XminRule = XminRule::Quantile(0.9);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub exponent: f64,
    pub xmin: f64,
    pub stderr: f64,
    pub n_tail: usize,
    pub method: TailMethod,
}

/// Fit the density exponent α of P(x) ~ x^(−α) above `xmin`.
///
/// Hill: α̂ = 1 + n_tail / Σ log(x_i / xmin) over samples strictly above
/// xmin, with stderr (α̂ − 1)/√n_tail. Regression: negated least-squares
/// slope of log density against log bin center over the occupied log bins
/// above xmin, count-weighted so that sparsely populated far-tail bins
/// (whose log density carries variance ≈ 1/count) do not swamp the fit.
pub fn fit_tail(samples: &[f64], rule: XminRule, method: TailMethod) -> Result<TailFit> {
    ensure_finite(samples)?;
    let xmin = match rule {
        XminRule::Quantile(q) => {
            if !(0.0..1.0).contains(&q) {
                return Err(Error::Domain(format!(
                    "xmin quantile must lie in (0, 1), got {q}"
                )));
            }
            quantile(samples, q)
        }
        XminRule::Fixed(v) => v,
    };
    if !(xmin.is_finite() && xmin > 0.0) {
        return Err(Error::Domain(format!("xmin must be positive, got {xmin}")));
    }

    let tail: Vec<f64> = samples.iter().copied().filter(|&x| x > xmin).collect();
    if tail.len() < MIN_TAIL {
        return Err(Error::TooFewSamples {
            what: "tail fit",
            needed: MIN_TAIL,
            got: tail.len(),
        });
    }

    match method {
        TailMethod::Hill => {
            let log_sum: f64 = tail.iter().map(|&x| (x / xmin).ln()).sum();
            if log_sum <= 0.0 {
                return Err(Error::DegenerateTail);
            }
            let exponent = 1.0 + tail.len() as f64 / log_sum;
            Ok(TailFit {
                exponent,
                xmin,
                stderr: (exponent - 1.0) / (tail.len() as f64).sqrt(),
                n_tail: tail.len(),
                method,
            })
        }
        TailMethod::LogLogRegression => {
            let hist = tail_histogram(&tail)?;
            let centers = hist.centers();
            let mut lx = Vec::new();
            let mut ly = Vec::new();
            let mut weights = Vec::new();
            for (i, &d) in hist.density.iter().enumerate() {
                if hist.counts[i] > 0 && d > 0.0 {
                    lx.push(centers[i].ln());
                    ly.push(d.ln());
                    weights.push(hist.counts[i] as f64);
                }
            }
            if lx.len() < 3 {
                return Err(Error::TooFewSamples {
                    what: "log-log regression bins",
                    needed: 3,
                    got: lx.len(),
                });
            }
            let fit =
                super::fit_line_weighted(&lx, &ly, Some(&weights)).ok_or(Error::DegenerateTail)?;
            Ok(TailFit {
                exponent: -fit.slope,
                xmin,
                stderr: fit.slope_stderr,
                n_tail: tail.len(),
                method,
            })
        }
    }
}

fn tail_histogram(tail: &[f64]) -> Result<Histogram> {
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let decades = (hi / lo).log10().max(0.5);
    let bins = (decades * BINS_PER_DECADE).ceil() as usize;
    histogram(tail, bins.max(4), Binning::Log)
}

/// Width, in decades, of the longest contiguous stretch of a log-binned
/// density whose local log-log slope stays within `tol` of `target`.
///
/// The local slope at bin i is a least-squares slope over a centered window
/// of `window` bins (occupied bins only), which damps bin-count noise.
pub fn straight_span_decades(hist: &Histogram, target: f64, tol: f64, window: usize) -> f64 {
    let centers = hist.centers();
    // Occupied bins only; empty bins would inject log(0).
    let pts: Vec<(f64, f64)> = hist
        .density
        .iter()
        .enumerate()
        .filter(|(i, &d)| hist.counts[*i] > 0 && d > 0.0)
        .map(|(i, &d)| (centers[i].ln(), d.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let half = window.max(2) / 2;
    let local_ok: Vec<bool> = (0..pts.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(pts.len());
            let xs: Vec<f64> = pts[lo..hi].iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pts[lo..hi].iter().map(|p| p.1).collect();
            match fit_line(&xs, &ys) {
                Some(f) => (f.slope - target).abs() <= tol,
                None => false,
            }
        })
        .collect();

    let mut best = 0.0_f64;
    let mut run_start: Option<usize> = None;
    for i in 0..=local_ok.len() {
        let ok = i < local_ok.len() && local_ok[i];
        match (ok, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                let span = (pts[i - 1].0 - pts[s].0) / std::f64::consts::LN_10;
                best = best.max(span);
                run_start = None;
            }
            _ => {}
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use proptest::prelude::*;

    /// Exact draws with density p(x) ∝ x^(−alpha) above xmin, by inverting
    /// the CDF: the survival exponent is alpha − 1.
    fn pareto_samples(alpha: f64, xmin: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = SplitMix64::new(seed);
        (0..n)
            .map(|_| xmin * (1.0 - rng.next_f64()).powf(-1.0 / (alpha - 1.0)))
            .collect()
    }

    #[test]
    fn hill_recovers_pareto_two() {
        let samples = pareto_samples(2.0, 1.0, 100_000, 11);
        let fit = fit_tail(&samples, XminRule::Fixed(1.0), TailMethod::Hill).unwrap();
        assert!(
            (fit.exponent - 2.0).abs() < 0.02,
            "exponent {} off target 2.00 ± 0.02",
            fit.exponent
        );
        assert!(fit.stderr > 0.0 && fit.stderr < 0.01);
    }

    #[test]
    fn hill_recovers_multiple_exponents_within_three_stderr() {
        for (alpha, seed) in [(1.5, 21u64), (2.0, 22), (3.0, 23)] {
            let samples = pareto_samples(alpha, 1.0, 50_000, seed);
            let fit = fit_tail(&samples, XminRule::Fixed(1.0), TailMethod::Hill).unwrap();
            assert!(
                (fit.exponent - alpha).abs() < 3.0 * fit.stderr,
                "α = {alpha}: got {} ± {}",
                fit.exponent,
                fit.stderr
            );
        }
    }

    #[test]
    fn quantile_rule_sets_xmin_from_data() {
        let samples = pareto_samples(2.0, 1.0, 50_000, 3);
        let fit = fit_tail(&samples, XminRule::Quantile(0.9), TailMethod::Hill).unwrap();
        // Survival (xmin/x) puts the 90th percentile at 10.
        assert!((fit.xmin - 10.0).abs() < 0.5, "xmin {}", fit.xmin);
        assert!((fit.exponent - 2.0).abs() < 3.0 * fit.stderr + 0.05);
    }

    #[test]
    fn loglog_regression_recovers_pareto_two() {
        let samples = pareto_samples(2.0, 1.0, 200_000, 7);
        let fit = fit_tail(&samples, XminRule::Fixed(1.0), TailMethod::LogLogRegression).unwrap();
        assert!(
            (fit.exponent - 2.0).abs() < 0.15,
            "regression exponent {}",
            fit.exponent
        );
    }

    #[test]
    fn degenerate_inputs_error() {
        let constant = vec![2.0; 100];
        // Strictly-above-xmin tail of a constant file is empty.
        assert!(matches!(
            fit_tail(&constant, XminRule::Quantile(0.9), TailMethod::Hill),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(matches!(
            fit_tail(&[1.0, 2.0], XminRule::Fixed(0.0), TailMethod::Hill),
            Err(Error::Domain(_))
        ));
        let few = pareto_samples(2.0, 1.0, 9, 1);
        assert!(matches!(
            fit_tail(&few, XminRule::Fixed(1.0), TailMethod::Hill),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn straight_span_sees_exact_power_law() {
        // Synthetic histogram: exact m^-2 over four decades.
        let samples = pareto_samples(2.0, 1.0, 400_000, 77);
        let capped: Vec<f64> = samples.into_iter().filter(|&x| x < 1e4).collect();
        let hist = histogram(&capped, 32, Binning::Log).unwrap();
        let span = straight_span_decades(&hist, -2.0, 0.2, 5);
        assert!(span > 2.0, "span {span} should cover most of the range");
        // A slope far from the truth matches nowhere.
        let none = straight_span_decades(&hist, -6.0, 0.2, 5);
        assert!(none < 0.5, "span {none} for a wrong slope");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        /// Hill on exact Pareto data recovers α within 5 stderr for any
        /// α in [1.2, 4] and any seed.
        #[test]
        fn hill_is_consistent(alpha in 1.2f64..4.0, seed in 0u64..1000) {
            let samples = pareto_samples(alpha, 1.0, 20_000, seed);
            let fit = fit_tail(&samples, XminRule::Fixed(1.0), TailMethod::Hill).unwrap();
            prop_assert!((fit.exponent - alpha).abs() < 5.0 * fit.stderr);
        }
    }
}

//! Conditional-density locus: for a family of sample groups (one per
//! global savings parameter), the density of each group evaluated at that
//! group's own mean. Regressing log density on log mean exposes how the
//! per-group distributions scale with their means.

use super::histogram::{histogram, Binning};
use super::{ensure_finite, fit_line, mean};
use crate::error::{Error, Result};

/// Minimum samples per group.
pub const MIN_GROUP: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocusPoint {
    pub mean_m: f64,
    pub density_at_mean: f64,
}

/// One locus point per group: (group mean, group density at that mean).
///
/// Densities come from per-group log-binned histograms with
/// `bins_per_decade` resolution (minimum 8 bins overall); the resolution
/// must be fine enough that the bin at the mean is narrow compared with the
/// group's spread.
pub fn conditional_density_locus(
    groups: &[Vec<f64>],
    bins_per_decade: usize,
) -> Result<Vec<LocusPoint>> {
    if groups.is_empty() {
        return Err(Error::EmptySamples);
    }
    groups
        .iter()
        .map(|group| {
            ensure_finite(group)?;
            if group.len() < MIN_GROUP {
                return Err(Error::TooFewSamples {
                    what: "locus group",
                    needed: MIN_GROUP,
                    got: group.len(),
                });
            }
            let m = mean(group);
            let lo = group.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = group.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if lo <= 0.0 {
                return Err(Error::NonPositiveSample(lo));
            }
            let decades = (hi / lo).log10().max(0.1);
            let bins = ((decades * bins_per_decade as f64).ceil() as usize).max(8);
            let hist = histogram(group, bins, Binning::Log)?;
            let density_at_mean = hist.density_at(m).ok_or(Error::OutOfRange(m))?;
            Ok(LocusPoint {
                mean_m: m,
                density_at_mean,
            })
        })
        .collect()
}

/// Least-squares slope of log density against log mean over the locus.
pub fn locus_slope(points: &[LocusPoint]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::TooFewSamples {
            what: "locus slope",
            needed: 2,
            got: points.len(),
        });
    }
    let lx: Vec<f64> = points.iter().map(|p| p.mean_m.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.density_at_mean.ln()).collect();
    let fit = fit_line(&lx, &ly).ok_or_else(|| {
        Error::InvalidGrid("locus means are degenerate; slope is undefined".into())
    })?;
    Ok(fit.slope)
}

//! Linear- and log-binned density estimation.

use super::{ensure_finite, pairwise_sum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binning {
    Linear,
    Log,
}

/// A normalized density estimate: `edges` has B+1 entries, `counts` and
/// `density` have B, and Σ density·width = 1 up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
    pub binning: Binning,
}

impl Histogram {
    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Bin centers: arithmetic for linear bins, geometric for log bins.
    pub fn centers(&self) -> Vec<f64> {
        self.edges
            .windows(2)
            .map(|w| match self.binning {
                Binning::Linear => 0.5 * (w[0] + w[1]),
                Binning::Log => (w[0] * w[1]).sqrt(),
            })
            .collect()
    }

    /// Index of the bin containing `x`; the right edge belongs to the last
    /// bin.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        let lo = *self.edges.first().unwrap();
        let hi = *self.edges.last().unwrap();
        if !(lo..=hi).contains(&x) {
            return None;
        }
        let idx = self.edges.partition_point(|e| *e <= x);
        Some(idx.saturating_sub(1).min(self.counts.len() - 1))
    }

    pub fn density_at(&self, x: f64) -> Option<f64> {
        self.bin_of(x).map(|i| self.density[i])
    }

    /// Σ density·width, which is 1 for any in-range sample set.
    pub fn integral(&self) -> f64 {
        let terms: Vec<f64> = self
            .density
            .iter()
            .zip(self.widths())
            .map(|(d, w)| d * w)
            .collect();
        pairwise_sum(&terms)
    }
}

/// Estimate the density of `samples` with `bins` bins. Linear edges are
/// equally spaced over [min, max]; log edges are geometric (all samples
/// must be strictly positive). A degenerate range (all samples equal) is
/// widened symmetrically around the common value.
pub fn histogram(samples: &[f64], bins: usize, binning: Binning) -> Result<Histogram> {
    ensure_finite(samples)?;
    if bins == 0 {
        return Err(Error::InvalidGrid("bin count must be at least 1".into()));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in samples {
        if binning == Binning::Log && x <= 0.0 {
            return Err(Error::NonPositiveSample(x));
        }
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if lo == hi {
        match binning {
            Binning::Linear => {
                lo -= 0.5;
                hi += 0.5;
            }
            Binning::Log => {
                lo *= 0.5;
                hi *= 2.0;
            }
        }
    }

    let mut edges = Vec::with_capacity(bins + 1);
    match binning {
        Binning::Linear => {
            let span = hi - lo;
            for i in 0..=bins {
                edges.push(lo + span * i as f64 / bins as f64);
            }
        }
        Binning::Log => {
            let (llo, lhi) = (lo.ln(), hi.ln());
            for i in 0..=bins {
                edges.push((llo + (lhi - llo) * i as f64 / bins as f64).exp());
            }
        }
    }
    // Pin the outer edges so every sample is in range despite rounding.
    edges[0] = lo;
    edges[bins] = hi;

    let mut counts = vec![0u64; bins];
    for &x in samples {
        let idx = edges.partition_point(|e| *e <= x);
        counts[idx.saturating_sub(1).min(bins - 1)] += 1;
    }
    let total: u64 = counts.iter().sum();
    let density: Vec<f64> = counts
        .iter()
        .zip(edges.windows(2))
        .map(|(&c, w)| {
            let width = w[1] - w[0];
            if width > 0.0 {
                c as f64 / (total as f64 * width)
            } else {
                0.0
            }
        })
        .collect();

    Ok(Histogram {
        edges,
        counts,
        density,
        binning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use proptest::prelude::*;

    #[test]
    fn uniform_samples_give_flat_density() {
        let mut rng = SplitMix64::new(99);
        let samples: Vec<f64> = (0..1_000_000).map(|_| rng.next_f64()).collect();
        let hist = histogram(&samples, 20, Binning::Linear).unwrap();
        for d in &hist.density {
            assert!(
                (d - 1.0).abs() < 0.02,
                "density {d} deviates from 1 by ≥ 2%"
            );
        }
        assert!((hist.integral() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn repeated_value_single_bin() {
        let samples = vec![3.5; 100];
        let hist = histogram(&samples, 1, Binning::Linear).unwrap();
        let width = hist.edges[1] - hist.edges[0];
        assert_eq!(hist.counts[0], 100);
        assert!((hist.density[0] - 1.0 / width).abs() < 1e-12);
    }

    #[test]
    fn lognormal_log_bins_normalize() {
        let mut rng = SplitMix64::new(5);
        // exp of an approximate standard normal via sum of 12 uniforms.
        let samples: Vec<f64> = (0..1_000_000)
            .map(|_| {
                let z: f64 = (0..12).map(|_| rng.next_f64()).sum::<f64>() - 6.0;
                z.exp()
            })
            .collect();
        let hist = histogram(&samples, 50, Binning::Log).unwrap();
        assert!((hist.integral() - 1.0).abs() < 1e-9);
        assert_eq!(hist.counts.iter().sum::<u64>(), 1_000_000);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            histogram(&[], 10, Binning::Linear),
            Err(Error::EmptySamples)
        ));
        assert!(matches!(
            histogram(&[1.0, -2.0], 10, Binning::Log),
            Err(Error::NonPositiveSample(_))
        ));
        assert!(matches!(
            histogram(&[1.0, f64::NAN], 10, Binning::Linear),
            Err(Error::NonFiniteSample(_))
        ));
    }

    #[test]
    fn density_lookup_covers_edges() {
        let samples = vec![0.0, 0.25, 0.5, 0.75, 1.0];
        let hist = histogram(&samples, 4, Binning::Linear).unwrap();
        assert_eq!(hist.bin_of(0.0), Some(0));
        assert_eq!(hist.bin_of(1.0), Some(3));
        assert_eq!(hist.bin_of(1.1), None);
        assert_eq!(hist.bin_of(-0.1), None);
    }

    proptest! {
        /// Density integrates to 1 and counts cover every sample, for any
        /// sample set and bin count.
        #[test]
        fn normalization_holds(
            samples in proptest::collection::vec(0.001f64..1e6, 2..400),
            bins in 1usize..64,
            log_bins in proptest::bool::ANY,
        ) {
            let binning = if log_bins { Binning::Log } else { Binning::Linear };
            let hist = histogram(&samples, bins, binning).unwrap();
            prop_assert!((hist.integral() - 1.0).abs() < 1e-9);
            prop_assert_eq!(hist.counts.iter().sum::<u64>(), samples.len() as u64);
        }
    }
}

//! Order-parameter / variance sweeps over λ and critical-point location.
//!
//! The capped product map m' = min{λ(1+ε)m, 1} orders at large λ and dies
//! at small λ. Its per-step log growth rate is log λ + ⟨log(1+ε)⟩, so the
//! transition sits at the root λ_c = exp(−⟨log(1+ε)⟩). The sweep records,
//! per grid point, the long-time ensemble mean and variance of m plus that
//! growth rate; the critical estimate combines the growth-rate root with a
//! threshold crossing of the order parameter refined by bisection.

use super::{mean, pairwise_sum};
use crate::engine::{evolve_replicas, SimulationPlan};
use crate::error::{Error, Result};
use crate::regimes::Regime;
use crate::rng::{substream, Domain};

/// Order parameter above this counts as ordered.
pub const ORDER_THRESHOLD: f64 = 1e-3;

/// Bisection width at which the order-parameter crossing is reported.
pub const LAMBDA_C_PRECISION: f64 = 1e-4;

/// Minimum draws for the growth-rate estimate.
pub const MIN_LYAPUNOV_DRAWS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub lambda_grid: Vec<f64>,
    pub order_parameter: Vec<f64>,
    pub variance: Vec<f64>,
    pub lyapunov: Vec<f64>,
    pub mean_log_one_plus_eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalEstimate {
    pub lambda_c_lyapunov: f64,
    pub lambda_c_order: f64,
}

/// Monte Carlo estimate of ⟨log(1+ε)⟩ over `draws` fresh uniforms.
/// Chunked with per-chunk substreams and pairwise-merged in chunk order, so
/// the result is reproducible and thread-independent.
pub fn mean_log_one_plus_eps_estimate(seed: u64, draws: u64) -> f64 {
    const CHUNK: u64 = 1 << 16;
    let chunks = draws.div_ceil(CHUNK);
    let sums = crate::engine::exec::indexed_map(chunks as usize, |c| {
        let mut rng = substream(seed, Domain::Lyapunov, c as u64, 0);
        let len = if (c as u64 + 1) * CHUNK <= draws {
            CHUNK
        } else {
            draws - c as u64 * CHUNK
        };
        let mut acc = 0.0;
        for _ in 0..len {
            acc += (1.0 + rng.next_f64()).ln();
        }
        acc
    });
    pairwise_sum(&sums) / draws as f64
}

/// Long-time ensemble mean of m at one λ: final recorded sample of each
/// replica, averaged.
fn order_parameter_at<F>(regime_of: &F, lambda: f64, plan: &SimulationPlan) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Regime + Sync,
{
    let regime = regime_of(lambda);
    let coeffs = regime.coefficients()?;
    let initial = crate::map::AgentState::unit(lambda);
    let chains = evolve_replicas(&initial, &coeffs, regime.coupling(), plan);
    let finals: Vec<f64> = chains.iter().map(|c| c.last().unwrap().m).collect();
    let m = mean(&finals);
    let var = if finals.len() > 1 {
        finals.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (finals.len() - 1) as f64
    } else {
        0.0
    };
    Ok((m, var))
}

/// Sweep a sorted λ grid: per grid point the long-time ensemble mean and
/// variance of m over `plan.replicas` chains, plus the per-step log growth
/// rate log λ + ⟨log(1+ε)⟩ estimated once from `lyapunov_draws` draws.
pub fn sweep_lambda<F>(
    regime_of: F,
    grid: &[f64],
    plan: &SimulationPlan,
    lyapunov_draws: u64,
) -> Result<SweepResult>
where
    F: Fn(f64) -> Regime + Sync,
{
    plan.validate()?;
    if grid.len() < 2 {
        return Err(Error::InvalidGrid("grid needs at least 2 points".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(
            "grid must be strictly increasing".into(),
        ));
    }
    if grid.iter().any(|&l| !(0.0..1.0).contains(&l)) {
        return Err(Error::InvalidGrid("grid values must lie in [0, 1)".into()));
    }
    if lyapunov_draws < MIN_LYAPUNOV_DRAWS {
        return Err(Error::InvalidGrid(format!(
            "lyapunov_draws must be at least {MIN_LYAPUNOV_DRAWS}, got {lyapunov_draws}"
        )));
    }

    let mean_log = mean_log_one_plus_eps_estimate(plan.seed, lyapunov_draws);
    let mut order = Vec::with_capacity(grid.len());
    let mut variance = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let (m, v) = order_parameter_at(&regime_of, lambda, plan)?;
        order.push(m);
        variance.push(v);
    }
    let lyapunov: Vec<f64> = grid.iter().map(|&l| l.ln() + mean_log).collect();

    Ok(SweepResult {
        lambda_grid: grid.to_vec(),
        order_parameter: order,
        variance,
        lyapunov,
        mean_log_one_plus_eps: mean_log,
    })
}

/// Locate the critical λ two ways.
///
/// The growth-rate root exp(−⟨log(1+ε)⟩) is the authoritative estimate; the
/// order-parameter crossing of [`ORDER_THRESHOLD`] is refined by bisection
/// (fresh runs under `plan`) to [`LAMBDA_C_PRECISION`] as a cross-check.
/// Errors when the grid does not straddle the transition.
pub fn estimate_critical_lambda<F>(
    regime_of: F,
    sweep: &SweepResult,
    plan: &SimulationPlan,
) -> Result<CriticalEstimate>
where
    F: Fn(f64) -> Regime + Sync,
{
    let lyap = &sweep.lyapunov;
    if lyap.first().is_none_or(|&v| v >= 0.0) || lyap.last().is_none_or(|&v| v <= 0.0) {
        return Err(Error::NoSignChange(
            "growth rate does not change sign inside the grid".into(),
        ));
    }
    let lambda_c_lyapunov = (-sweep.mean_log_one_plus_eps).exp();

    let first_ordered = sweep
        .order_parameter
        .iter()
        .position(|&m| m > ORDER_THRESHOLD);
    let j = match first_ordered {
        Some(j) if j > 0 => j,
        Some(_) => {
            return Err(Error::NoSignChange(
                "order parameter already exceeds the threshold at the grid start".into(),
            ))
        }
        None => {
            return Err(Error::NoSignChange(
                "order parameter never exceeds the threshold inside the grid".into(),
            ))
        }
    };

    let mut lo = sweep.lambda_grid[j - 1];
    let mut hi = sweep.lambda_grid[j];
    while hi - lo > LAMBDA_C_PRECISION {
        let mid = 0.5 * (lo + hi);
        let (m, _) = order_parameter_at(&regime_of, mid, plan)?;
        if m > ORDER_THRESHOLD {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    Ok(CriticalEstimate {
        lambda_c_lyapunov,
        lambda_c_order: 0.5 * (lo + hi),
    })
}

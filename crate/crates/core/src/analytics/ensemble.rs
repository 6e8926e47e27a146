//! Ensemble diagnostics over replicas: variance growth at checkpoints and
//! normality of scaled log values.

use super::moments::{moments, MomentSummary};
use crate::engine::{exec, Sample, SimulationPlan};
use crate::error::{Error, Result};
use crate::map::{step, AgentState, MapCoefficients, Theta};
use crate::rng::{substream, Domain};

/// How replica initial values are seeded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    Fixed(f64),
    /// m(0) uniform on [lo, hi), one seeded draw per replica.
    UniformSpread {
        lo: f64,
        hi: f64,
    },
}

impl InitialCondition {
    /// The default spread injected for variance-growth runs.
    pub const DEFAULT_SPREAD: InitialCondition =
        InitialCondition::UniformSpread { lo: 0.5, hi: 1.0 };
}

/// Whether replicas draw their own noise or share one common stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseSharing {
    Independent,
    Shared,
}

/// Evolve `replicas` chains of the multiplicative map and record the state
/// at each checkpoint (sorted step counts). Returns `[checkpoint][replica]`.
pub fn ensemble_checkpoints(
    coeffs: &MapCoefficients,
    checkpoints: &[u64],
    replicas: usize,
    seed: u64,
    init: InitialCondition,
    sharing: NoiseSharing,
) -> Result<Vec<Vec<Sample>>> {
    if checkpoints.is_empty() {
        return Err(Error::InvalidGrid("no checkpoints given".into()));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) || checkpoints[0] == 0 {
        return Err(Error::InvalidGrid(
            "checkpoints must be strictly increasing and positive".into(),
        ));
    }
    if replicas < 1 {
        return Err(Error::InvalidPlan("replicas must be at least 1".into()));
    }

    let coeffs = *coeffs;
    let n_checkpoints = checkpoints.len();
    let checkpoints = checkpoints.to_vec();
    let per_replica: Vec<Vec<Sample>> = exec::indexed_map(replicas, move |r| {
        let m0 = match init {
            InitialCondition::Fixed(v) => v,
            InitialCondition::UniformSpread { lo, hi } => {
                let mut init_rng = substream(seed, Domain::Init, r as u64, 0);
                lo + (hi - lo) * init_rng.next_f64()
            }
        };
        let mut state = AgentState {
            m: m0,
            lambda: coeffs.lambda1(),
            log_m: m0.ln(),
        };
        let noise_replica = match sharing {
            NoiseSharing::Independent => r as u64,
            NoiseSharing::Shared => 0,
        };
        let mut rng = substream(seed, Domain::Chain, 0, noise_replica);
        let mut out = Vec::with_capacity(checkpoints.len());
        let mut t = 0u64;
        for &cp in &checkpoints {
            while t < cp {
                let eps = rng.next_f64();
                state = step(
                    &state,
                    &coeffs,
                    &crate::map::NoiseDraw::independent(eps, 0.0),
                );
                t += 1;
            }
            out.push(Sample {
                m: state.m,
                log_m: state.log_m,
            });
        }
        out
    });

    // Transpose to [checkpoint][replica].
    Ok((0..n_checkpoints)
        .map(|c| per_replica.iter().map(|r| r[c]).collect())
        .collect())
}

/// Ensemble variance of m across replicas of the uncapped product map
/// m' = λ(1+ε)m at each checkpoint, with an initial spread m(0) ~ U[0.5, 1)
/// injected across replicas.
///
/// The growth diagnostic concerns the raw product form: at the critical λ
/// the per-replica log values random-walk with zero drift, so the ensemble
/// variance grows without bound, while below critical it collapses to 0.
/// (The θ-capped variant pins the distribution against the cap instead and
/// its variance eventually decays.)
pub fn variance_growth(
    lambda: f64,
    checkpoints: &[u64],
    plan: &SimulationPlan,
) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::InvalidRegime(format!(
            "lambda must lie in [0, 1), got {lambda}"
        )));
    }
    if plan.replicas < 1_000 {
        return Err(Error::TooFewSamples {
            what: "variance growth replicas",
            needed: 1_000,
            got: plan.replicas,
        });
    }
    let coeffs = MapCoefficients::new(lambda, lambda, 0.0, 1.0, Theta::Unbounded)?;
    let ensembles = ensemble_checkpoints(
        &coeffs,
        checkpoints,
        plan.replicas,
        plan.seed,
        InitialCondition::DEFAULT_SPREAD,
        NoiseSharing::Independent,
    )?;
    Ok(ensembles
        .iter()
        .map(|replicas| {
            let values: Vec<f64> = replicas.iter().map(|s| s.m).collect();
            let mean = super::mean(&values);
            values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64
        })
        .collect())
}

/// Moments of centered, √T-scaled final log values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalitySummary {
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub mean: f64,
    pub variance: f64,
}

/// Distribution check for multiplicative-growth runs: center each final
/// log m by `steps · drift_per_step`, scale by 1/√steps, and return the
/// four moments of the result. For an accumulating sum of independent
/// per-step logs the scaled values approach N(0, Var(log(1+ε))).
///
/// Errors when any final state carries no usable log value (m ≤ 0 with no
/// finite shadow).
pub fn normality_check(
    finals: &[Sample],
    steps: u64,
    drift_per_step: f64,
) -> Result<NormalitySummary> {
    if finals.is_empty() {
        return Err(Error::EmptySamples);
    }
    if steps == 0 {
        return Err(Error::Domain("steps must be positive".into()));
    }
    let sqrt_t = (steps as f64).sqrt();
    let center = steps as f64 * drift_per_step;
    let scaled: Vec<f64> = finals
        .iter()
        .map(|s| {
            if s.log_m.is_finite() {
                Ok((s.log_m - center) / sqrt_t)
            } else {
                Err(Error::NonPositiveSample(s.m))
            }
        })
        .collect::<Result<_>>()?;
    let MomentSummary {
        mean,
        variance,
        skewness,
        excess_kurtosis,
        ..
    } = moments(&scaled)?;
    Ok(NormalitySummary {
        skewness,
        excess_kurtosis,
        mean,
        variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{evolve_replicas, NoiseCoupling};
    use crate::regimes::gibrat_scaled;

    const LAMBDA_C: f64 = std::f64::consts::E / 4.0;

    #[test]
    fn variance_grows_at_critical_and_decays_below() {
        let plan = SimulationPlan::new(55, 0, 1, 1, 1_000).unwrap();
        let checkpoints = [100, 1_000];
        let critical = variance_growth(LAMBDA_C, &checkpoints, &plan).unwrap();
        assert!(
            critical[1] > critical[0],
            "critical variance should grow: {critical:?}"
        );
        let sub = variance_growth(0.5, &checkpoints, &plan).unwrap();
        assert!(
            sub[1] < sub[0],
            "subcritical variance should decay: {sub:?}"
        );
    }

    #[test]
    fn shared_noise_without_spread_is_degenerate() {
        let coeffs = MapCoefficients::new(LAMBDA_C, LAMBDA_C, 0.0, 1.0, Theta::Unbounded).unwrap();
        let ensembles = ensemble_checkpoints(
            &coeffs,
            &[100, 1_000],
            200,
            7,
            InitialCondition::Fixed(1.0),
            NoiseSharing::Shared,
        )
        .unwrap();
        for replicas in &ensembles {
            let first = replicas[0];
            assert!(replicas.iter().all(|s| *s == first));
        }

        // Same start, independent noise: the ensemble spreads out.
        let independent = ensemble_checkpoints(
            &coeffs,
            &[100, 1_000],
            200,
            7,
            InitialCondition::Fixed(1.0),
            NoiseSharing::Independent,
        )
        .unwrap();
        let var = |replicas: &[Sample]| {
            let values: Vec<f64> = replicas.iter().map(|s| s.m).collect();
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64
        };
        let v0 = var(&independent[0]);
        let v1 = var(&independent[1]);
        assert!(
            v0 > 0.0 && v1 > v0,
            "independent noise must spread: {v0} {v1}"
        );
    }

    #[test]
    fn replica_floor_is_enforced() {
        let plan = SimulationPlan::new(1, 0, 1, 1, 10).unwrap();
        assert!(matches!(
            variance_growth(0.5, &[10, 20], &plan),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn scaled_growth_logs_look_normal() {
        // 2000 replicas of 2000 steps with ε on [0, 0.1).
        let eps_max = 0.1;
        let t = 2_000u64;
        let coeffs = gibrat_scaled(eps_max).unwrap();
        let plan = SimulationPlan::new(77, t - 1, 1, 1, 2_000).unwrap();
        let finals: Vec<Sample> = evolve_replicas(
            &AgentState::unit(1.0),
            &coeffs,
            NoiseCoupling::Independent,
            &plan,
        )
        .iter()
        .map(|chain| chain[0])
        .collect();

        // Drift ⟨ln(1 + ε̄ u)⟩ by closed form.
        let drift = ((1.0 + eps_max) * (1.0_f64 + eps_max).ln() - eps_max) / eps_max;
        let summary = normality_check(&finals, t, drift).unwrap();

        // Mean within 3 standard errors of 0.
        let se = (summary.variance / finals.len() as f64).sqrt();
        assert!(
            summary.mean.abs() < 3.0 * se,
            "centered mean {} vs se {se}",
            summary.mean
        );
        assert!(
            summary.skewness.abs() < 0.15,
            "skewness {}",
            summary.skewness
        );
        assert!(
            summary.excess_kurtosis.abs() < 0.3,
            "kurtosis {}",
            summary.excess_kurtosis
        );

        // Scaled variance matches Var(log(1+ε)) from Simpson quadrature.
        let f = |x: f64| (1.0 + x).ln();
        let quad = |g: &dyn Fn(f64) -> f64| {
            let n = 2_000;
            let h = eps_max / n as f64;
            let mut acc = g(0.0) + g(eps_max);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * g(i as f64 * h);
            }
            acc * h / 3.0 / eps_max
        };
        let ex2 = quad(&|x| f(x) * f(x));
        let ex = quad(&f);
        let var_log = ex2 - ex * ex;
        assert!(
            (summary.variance - var_log).abs() / var_log < 0.1,
            "variance {} vs quadrature {var_log}",
            summary.variance
        );
    }

    #[test]
    fn bad_finals_are_rejected() {
        let finals = [Sample {
            m: 0.0,
            log_m: f64::NEG_INFINITY,
        }];
        assert!(matches!(
            normality_check(&finals, 10, 0.0),
            Err(Error::NonPositiveSample(_))
        ));
    }
}

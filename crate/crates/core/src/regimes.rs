//! Named parameterizations of the map and population builders.
//!
//! Each regime fixes (λ₁, λ₂, λ₃, n, θ) as a function of a single savings /
//! conviction parameter λ:
//!
//! * skewed (independent or coupled noise): λ₁ = λ, λ₂ = λ₃ = 1−λ, n = 1,
//!   θ = ∞ — stationary, positively skewed, mean 1;
//! * power-law: same λᵢ but n ≤ 0, so the additive scale (1−λ)ⁿ inflates
//!   the per-λ mean to (1−λ)^{n−1};
//! * opinion: λ₁ = λ₂ = λ, λ₃ = 0, θ = 1 — capped product map with a phase
//!   transition in the long-time average;
//! * proportionate growth: λ₁ = λ₂ = 1, λ₃ = 0, θ = ∞ — the log-normal
//!   generator.

use crate::engine::NoiseCoupling;
use crate::error::{Error, Result};
use crate::map::{AgentState, MapCoefficients, Theta, LAMBDA_CAP, N_MIN};
use crate::rng::{substream, Domain};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    SkewedIndependent { lambda: f64 },
    SkewedCoupled { lambda: f64 },
    PowerLaw { lambda: f64, n: f64 },
    Opinion { lambda: f64 },
    Gibrat,
}

impl Regime {
    /// The coefficient tuple this regime denotes.
    pub fn coefficients(&self) -> Result<MapCoefficients> {
        match *self {
            Regime::SkewedIndependent { lambda } | Regime::SkewedCoupled { lambda } => {
                check_lambda(lambda)?;
                MapCoefficients::new(lambda, 1.0 - lambda, 1.0 - lambda, 1.0, Theta::Unbounded)
            }
            Regime::PowerLaw { lambda, n } => {
                check_lambda(lambda)?;
                if !n.is_finite() || n > 0.0 {
                    return Err(Error::InvalidRegime(format!(
                        "power-law regime needs n ≤ 0, got {n}"
                    )));
                }
                if n < N_MIN {
                    return Err(Error::InvalidRegime(format!(
                        "power-law regime needs n ≥ {N_MIN}, got {n}"
                    )));
                }
                MapCoefficients::new(lambda, 1.0 - lambda, 1.0 - lambda, n, Theta::Unbounded)
            }
            Regime::Opinion { lambda } => {
                check_lambda(lambda)?;
                MapCoefficients::new(lambda, lambda, 0.0, 1.0, Theta::Bounded(1.0))
            }
            Regime::Gibrat => MapCoefficients::new(1.0, 1.0, 0.0, 1.0, Theta::Unbounded),
        }
    }

    pub fn coupling(&self) -> NoiseCoupling {
        match self {
            Regime::SkewedCoupled { .. } => NoiseCoupling::Coupled,
            _ => NoiseCoupling::Independent,
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match *self {
            Regime::SkewedIndependent { lambda }
            | Regime::SkewedCoupled { lambda }
            | Regime::PowerLaw { lambda, .. }
            | Regime::Opinion { lambda } => Some(lambda),
            Regime::Gibrat => None,
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidRegime(format!(
            "lambda must lie in [0, 1], got {lambda}"
        )));
    }
    Ok(())
}

/// Proportionate growth with ε uniform on [0, ε̄) instead of [0, 1):
/// the factor 1 + ε̄·u with u ~ U[0,1) realizes the narrow-noise limit.
pub fn gibrat_scaled(eps_max: f64) -> Result<MapCoefficients> {
    if !eps_max.is_finite() || !(0.0 < eps_max && eps_max <= 1.0) {
        return Err(Error::InvalidRegime(format!(
            "eps_max must lie in (0, 1], got {eps_max}"
        )));
    }
    MapCoefficients::new(1.0, eps_max, 0.0, 1.0, Theta::Unbounded)
}

/// How per-agent λ values are assigned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaScheme {
    Constant {
        value: f64,
    },
    /// Seeded uniform draws on [lo, hi); hi is clamped to [`LAMBDA_CAP`]
    /// so per-agent means stay finite in the power-law regime.
    UniformRandom {
        lo: f64,
        hi: f64,
    },
    /// λ_i = (i/N)·λ_max for i = 1..N; strictly increasing, max exactly
    /// λ_max.
    DeterministicRamp {
        lambda_max: f64,
    },
}

impl LambdaScheme {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LambdaScheme::Constant { value } => {
                if !value.is_finite() || !(0.0..1.0).contains(&value) {
                    return Err(Error::InvalidScheme(format!(
                        "constant lambda must lie in [0, 1), got {value}"
                    )));
                }
            }
            LambdaScheme::UniformRandom { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi > 1.0 || lo >= hi {
                    return Err(Error::InvalidScheme(format!(
                        "uniform range must satisfy 0 ≤ lo < hi ≤ 1, got [{lo}, {hi})"
                    )));
                }
            }
            LambdaScheme::DeterministicRamp { lambda_max } => {
                if !lambda_max.is_finite() || !(0.0 < lambda_max && lambda_max < 1.0) {
                    return Err(Error::InvalidScheme(format!(
                        "ramp lambda_max must lie in (0, 1), got {lambda_max}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Build `n` agents with unit initial wealth and λ assigned per scheme.
/// Uniform draws come from the population substream of `seed`; λ is fixed
/// for the life of each agent.
pub fn build_population(n: usize, scheme: &LambdaScheme, seed: u64) -> Result<Vec<AgentState>> {
    if n < 1 {
        return Err(Error::InvalidScheme(
            "population size must be at least 1".into(),
        ));
    }
    scheme.validate()?;
    let lambdas: Vec<f64> = match *scheme {
        LambdaScheme::Constant { value } => vec![value; n],
        LambdaScheme::UniformRandom { lo, hi } => {
            let hi = hi.min(LAMBDA_CAP);
            let mut rng = substream(seed, Domain::Population, 0, 0);
            (0..n).map(|_| lo + (hi - lo) * rng.next_f64()).collect()
        }
        LambdaScheme::DeterministicRamp { lambda_max } => (1..=n)
            .map(|i| (i as f64 / n as f64) * lambda_max)
            .collect(),
    };
    Ok(lambdas.into_iter().map(AgentState::unit).collect())
}

/// Per-agent coefficients for a population under a regime template keyed
/// by each agent's own λ.
pub fn population_coefficients<F>(
    agents: &[AgentState],
    template: F,
) -> Result<Vec<MapCoefficients>>
where
    F: Fn(f64) -> Regime,
{
    agents
        .iter()
        .map(|a| template(a.lambda).coefficients())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn skewed_independent_tuple() {
        let c = Regime::SkewedIndependent { lambda: 0.4 }
            .coefficients()
            .unwrap();
        assert_eq!(
            (c.lambda1(), c.lambda2(), c.lambda3(), c.n()),
            (0.4, 0.6, 0.6, 1.0)
        );
        assert!(c.theta().is_unbounded());
        let r = Regime::SkewedIndependent { lambda: 0.4 };
        assert_eq!(r.coupling(), NoiseCoupling::Independent);
        let rc = Regime::SkewedCoupled { lambda: 0.4 };
        assert_eq!(rc.coupling(), NoiseCoupling::Coupled);
        assert_eq!(rc.coefficients().unwrap(), c);
    }

    #[test]
    fn opinion_tuple() {
        let c = Regime::Opinion { lambda: 0.7 }.coefficients().unwrap();
        assert_eq!((c.lambda1(), c.lambda2(), c.lambda3()), (0.7, 0.7, 0.0));
        assert_eq!(c.theta(), Theta::Bounded(1.0));
        assert!(c.is_multiplicative());
    }

    #[test]
    fn power_law_tuple() {
        let c = Regime::PowerLaw {
            lambda: 0.25,
            n: -20.0,
        }
        .coefficients()
        .unwrap();
        assert_eq!(
            (c.lambda1(), c.lambda2(), c.lambda3(), c.n()),
            (0.25, 0.75, 0.75, -20.0)
        );
        assert!(c.theta().is_unbounded());
        assert_relative_eq!(c.additive_scale(), 0.75_f64.powi(-20), epsilon = 1e-9);
    }

    #[test]
    fn rejects_bad_regimes() {
        assert!(Regime::PowerLaw {
            lambda: 0.5,
            n: 0.5
        }
        .coefficients()
        .is_err());
        assert!(Regime::PowerLaw {
            lambda: 0.5,
            n: -200.0
        }
        .coefficients()
        .is_err());
        assert!(Regime::SkewedIndependent { lambda: 1.5 }
            .coefficients()
            .is_err());
        assert!(Regime::Opinion { lambda: -0.1 }.coefficients().is_err());
    }

    #[test]
    fn ramp_assigns_exact_increasing_lambdas() {
        let pop =
            build_population(4, &LambdaScheme::DeterministicRamp { lambda_max: 0.8 }, 0).unwrap();
        let lambdas: Vec<f64> = pop.iter().map(|a| a.lambda).collect();
        assert_eq!(lambdas, vec![0.2, 0.4, 0.6000000000000001, 0.8]);
        assert!(lambdas.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*lambdas.last().unwrap(), 0.8);
        assert!(pop.iter().all(|a| a.m == 1.0 && a.log_m == 0.0));
    }

    #[test]
    fn uniform_scheme_hits_its_mean() {
        let pop =
            build_population(200, &LambdaScheme::UniformRandom { lo: 0.0, hi: 0.33 }, 42).unwrap();
        let mean = pop.iter().map(|a| a.lambda).sum::<f64>() / 200.0;
        // 3σ of the mean of 200 U[0, 0.33) draws.
        let tol = 3.0 * 0.33 / (12.0_f64).sqrt() / (200.0_f64).sqrt();
        assert!((mean - 0.165).abs() < tol, "mean {mean} off by > {tol}");
        assert!(pop.iter().all(|a| (0.0..0.33).contains(&a.lambda)));
    }

    #[test]
    fn single_constant_agent() {
        let pop = build_population(1, &LambdaScheme::Constant { value: 0.5 }, 7).unwrap();
        assert_eq!(pop.len(), 1);
        assert_eq!(pop[0].lambda, 0.5);
        assert_eq!(pop[0].m, 1.0);
    }

    #[test]
    fn population_is_deterministic_under_seed() {
        let scheme = LambdaScheme::UniformRandom { lo: 0.0, hi: 1.0 };
        let a = build_population(64, &scheme, 5).unwrap();
        let b = build_population(64, &scheme, 5).unwrap();
        assert_eq!(a, b);
        // And the cap keeps every λ strictly below 1.
        assert!(a.iter().all(|ag| ag.lambda < 1.0));
    }

    #[test]
    fn scheme_validation() {
        assert!(LambdaScheme::DeterministicRamp { lambda_max: 1.0 }
            .validate()
            .is_err());
        assert!(LambdaScheme::UniformRandom { lo: 0.5, hi: 0.2 }
            .validate()
            .is_err());
        assert!(LambdaScheme::Constant { value: 1.0 }.validate().is_err());
        assert!(build_population(0, &LambdaScheme::Constant { value: 0.2 }, 0).is_err());
    }

    #[test]
    fn scaled_growth_coefficients() {
        let c = gibrat_scaled(0.1).unwrap();
        assert_eq!((c.lambda1(), c.lambda2(), c.lambda3()), (1.0, 0.1, 0.0));
        assert!(gibrat_scaled(0.0).is_err());
        assert!(gibrat_scaled(1.5).is_err());
    }

    #[test]
    fn per_agent_coefficients_follow_each_lambda() {
        let pop =
            build_population(3, &LambdaScheme::DeterministicRamp { lambda_max: 0.9 }, 0).unwrap();
        let coeffs =
            population_coefficients(&pop, |lambda| Regime::PowerLaw { lambda, n: -20.0 }).unwrap();
        for (agent, c) in pop.iter().zip(&coeffs) {
            assert_eq!(c.lambda1(), agent.lambda);
            assert_eq!(c.lambda2(), 1.0 - agent.lambda);
        }
    }
}

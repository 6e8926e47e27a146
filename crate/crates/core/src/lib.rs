//! Deterministic, seedable Monte Carlo engine and analytics for the capped
//! random affine map
//!
//! ```text
//! m(t) = min{ (λ₁ + ε_t λ₂) m(t−1) + ξ_t λ₃ⁿ, θ }
//! ```
//!
//! whose limits reproduce four statistical regimes: a positively skewed
//! stationary wealth distribution, power-law tails from heterogeneous
//! savings, an opinion phase transition at λ_c = e/4, and log-normal
//! proportionate growth.
//!
//! * [`map`] — coefficients, agent state, and the single-step update;
//! * [`engine`] — seeded chain/replica/population evolution (data-parallel
//!   with the default `parallel` feature, sequential without it);
//! * [`regimes`] — named coefficient families and population builders;
//! * [`analytics`] — histograms, moments, tail fits, sweeps, ensemble
//!   diagnostics;
//! * [`oracle`] — closed-form reference values the simulations are checked
//!   against.
//!
//! Two runs with the same seed and inputs produce bit-identical output on
//! any thread count.
//!
//! ```
//! use stochmap::analytics::moments;
//! use stochmap::{evolve, m_values, oracle, AgentState, Regime, SimulationPlan};
//!
//! let regime = Regime::SkewedIndependent { lambda: 0.4 };
//! let plan = SimulationPlan::new(42, 5_000, 50_000, 1, 1)?;
//! let samples = evolve(
//!     &AgentState::unit(0.4),
//!     &regime.coefficients()?,
//!     regime.coupling(),
//!     &plan,
//! );
//! let stats = moments(&m_values(&samples))?;
//! assert!((stats.mean - oracle::stationary_mean_skewed()).abs() < 0.02);
//! assert!((stats.variance - oracle::stationary_variance_independent(0.4)?).abs() < 0.01);
//! # Ok::<(), stochmap::Error>(())
//! ```

pub mod analytics;
pub mod engine;
pub mod error;
pub mod map;
pub mod oracle;
pub mod regimes;
pub mod rng;

pub use engine::{
    configure_threads, evolve, evolve_population, evolve_population_sequential, evolve_replicas,
    evolve_replicas_sequential, m_values, NoiseCoupling, Sample, SimulationPlan,
};
pub use error::{Error, Result};
pub use map::{step, AgentState, MapCoefficients, NoiseDraw, Theta};
pub use regimes::{build_population, LambdaScheme, Regime};

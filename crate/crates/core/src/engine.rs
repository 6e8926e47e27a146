//! Chain, replica, and population evolution.
//!
//! Every chain owns a substream keyed by `(seed, agent, replica)`, so
//! ensembles can run data-parallel with results merged by index: the output
//! is a pure function of the inputs, independent of thread count and
//! schedule. With the `parallel` feature disabled everything runs on the
//! calling thread and produces the identical bytes.

use crate::error::{Error, Result};
use crate::map::{step, AgentState, MapCoefficients, NoiseDraw};
use crate::rng::{substream, Domain, SplitMix64};

/// Whether ξ is an independent draw or aliases ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseCoupling {
    Independent,
    Coupled,
}

/// Seed, burn-in, recording schedule, and ensemble size for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationPlan {
    pub seed: u64,
    pub burn_in: u64,
    pub samples: usize,
    pub stride: u64,
    pub replicas: usize,
}

impl SimulationPlan {
    pub const DEFAULT_BURN_IN: u64 = 10_000;
    pub const DEFAULT_SAMPLES: usize = 100_000;

    pub fn new(
        seed: u64,
        burn_in: u64,
        samples: usize,
        stride: u64,
        replicas: usize,
    ) -> Result<Self> {
        let plan = SimulationPlan {
            seed,
            burn_in,
            samples,
            stride,
            replicas,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::InvalidPlan("samples must be at least 1".into()));
        }
        if self.stride < 1 {
            return Err(Error::InvalidPlan("stride must be at least 1".into()));
        }
        if self.replicas < 1 {
            return Err(Error::InvalidPlan("replicas must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

impl Default for SimulationPlan {
    /// Burn-in 10⁴ then 10⁵ recorded steps, one chain.
    fn default() -> Self {
        SimulationPlan {
            seed: 0,
            burn_in: Self::DEFAULT_BURN_IN,
            samples: Self::DEFAULT_SAMPLES,
            stride: 1,
            replicas: 1,
        }
    }
}

/// One recorded observation: the direct value and its log-space shadow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub m: f64,
    pub log_m: f64,
}

/// Extract the direct values from a sample sequence.
pub fn m_values(samples: &[Sample]) -> Vec<f64> {
    samples.iter().map(|s| s.m).collect()
}

#[inline]
fn draw_noise(rng: &mut SplitMix64, coupling: NoiseCoupling, needs_xi: bool) -> NoiseDraw {
    // ε first, then ξ; ξ is skipped when coupled or when the additive term
    // vanishes, so runs replay exactly.
    let epsilon = rng.next_f64();
    match coupling {
        NoiseCoupling::Coupled => NoiseDraw::coupled(epsilon),
        NoiseCoupling::Independent => {
            let xi = if needs_xi { rng.next_f64() } else { 0.0 };
            NoiseDraw::independent(epsilon, xi)
        }
    }
}

/// Evolve one chain on the substream keyed by `(plan.seed, agent, replica)`:
/// `burn_in` discarded steps, then a sample recorded every `stride` steps.
pub fn run_chain(
    initial: &AgentState,
    coeffs: &MapCoefficients,
    coupling: NoiseCoupling,
    plan: &SimulationPlan,
    agent: u64,
    replica: u64,
) -> Vec<Sample> {
    let mut rng = substream(plan.seed, Domain::Chain, agent, replica);
    let needs_xi = coeffs.needs_xi();
    let mut state = *initial;
    for _ in 0..plan.burn_in {
        state = step(&state, coeffs, &draw_noise(&mut rng, coupling, needs_xi));
    }
    let mut out = Vec::with_capacity(plan.samples);
    for _ in 0..plan.samples {
        for _ in 0..plan.stride {
            state = step(&state, coeffs, &draw_noise(&mut rng, coupling, needs_xi));
        }
        debug_assert!(
            state.m >= 0.0 && coeffs.theta().bound().is_none_or(|t| state.m <= t),
            "recorded m = {} violates [0, theta]",
            state.m
        );
        out.push(Sample {
            m: state.m,
            log_m: state.log_m,
        });
    }
    out
}

/// Single-chain evolution (agent 0, replica 0 substream).
pub fn evolve(
    initial: &AgentState,
    coeffs: &MapCoefficients,
    coupling: NoiseCoupling,
    plan: &SimulationPlan,
) -> Vec<Sample> {
    run_chain(initial, coeffs, coupling, plan, 0, 0)
}

/// Evolve a population of non-interacting agents, one coefficient set per
/// agent, each on its own substream. Output is ordered by agent index.
pub fn evolve_population(
    agents: &[AgentState],
    coeffs: &[MapCoefficients],
    coupling: NoiseCoupling,
    plan: &SimulationPlan,
) -> Vec<Vec<Sample>> {
    assert_eq!(
        agents.len(),
        coeffs.len(),
        "one coefficient set per agent required"
    );
    exec::indexed_map(agents.len(), |i| {
        run_chain(&agents[i], &coeffs[i], coupling, plan, i as u64, 0)
    })
}

/// Sequential reference path for [`evolve_population`]; always produces the
/// same bytes as the parallel dispatch.
pub fn evolve_population_sequential(
    agents: &[AgentState],
    coeffs: &[MapCoefficients],
    coupling: NoiseCoupling,
    plan: &SimulationPlan,
) -> Vec<Vec<Sample>> {
    assert_eq!(agents.len(), coeffs.len());
    exec::indexed_map_sequential(agents.len(), |i| {
        run_chain(&agents[i], &coeffs[i], coupling, plan, i as u64, 0)
    })
}

/// Evolve `plan.replicas` independent chains of the same configuration,
/// replica r on substream `(seed, 0, r)`. Output is ordered by replica.
pub fn evolve_replicas(
    initial: &AgentState,
    coeffs: &MapCoefficients,
    coupling: NoiseCoupling,
    plan: &SimulationPlan,
) -> Vec<Vec<Sample>> {
    exec::indexed_map(plan.replicas, |r| {
        run_chain(initial, coeffs, coupling, plan, 0, r as u64)
    })
}

/// Sequential reference path for [`evolve_replicas`].
pub fn evolve_replicas_sequential(
    initial: &AgentState,
    coeffs: &MapCoefficients,
    coupling: NoiseCoupling,
    plan: &SimulationPlan,
) -> Vec<Vec<Sample>> {
    exec::indexed_map_sequential(plan.replicas, |r| {
        run_chain(initial, coeffs, coupling, plan, 0, r as u64)
    })
}

/// Pin the global worker count (0 = library default). A no-op in sequential
/// builds. Fails if a pool is already running with a different size.
#[cfg(feature = "parallel")]
pub fn configure_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::ThreadPool(e.to_string()))
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_threads: usize) -> Result<()> {
    Ok(())
}

pub(crate) mod exec {
    //! Data-parallel map with a sequential fallback. Both paths merge by
    //! index, so they are interchangeable bit for bit.

    #[cfg(feature = "parallel")]
    pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }

    #[cfg(not(feature = "parallel"))]
    pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        indexed_map_sequential(n, f)
    }

    pub fn indexed_map_sequential<T, F>(n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

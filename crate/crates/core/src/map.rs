//! The stochastic map and its single-step evolution.
//!
//! One agent with wealth (or opinion) `m` interacts with the market through
//!
//! ```text
//! m(t) = min{ (λ₁ + ε_t λ₂) m(t−1) + ξ_t λ₃ⁿ, θ }
//! ```
//!
//! with `ε_t, ξ_t` uniform on [0, 1) and independent unless coupled. The
//! multiplicative factor is the savings propensity, the additive term the
//! return on investment, and `θ` an optional upper cap.

use crate::error::{Error, Result};

/// Direct-space values below this report as 0 while the log-space shadow
/// keeps evolving; avoids denormalized arithmetic in decaying regimes.
pub const UNDERFLOW_LIMIT: f64 = 1e-300;

/// ln(UNDERFLOW_LIMIT); checked against `UNDERFLOW_LIMIT.ln()` in tests.
pub(crate) const LN_UNDERFLOW_LIMIT: f64 = -690.775_527_898_213_7;

/// Largest population savings parameter; keeps (1−λ)^{n−1} finite for the
/// power-law regime's n range.
pub const LAMBDA_CAP: f64 = 1.0 - 1.0 / (1u64 << 20) as f64;

/// Most negative accepted additive exponent. The n → −∞ limit is
/// approached with large-magnitude finite n (−20 in practice).
pub const N_MIN: f64 = -100.0;

/// Upper cap θ of the map: a positive finite bound or none at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theta {
    Bounded(f64),
    Unbounded,
}

impl Theta {
    pub fn is_unbounded(self) -> bool {
        matches!(self, Theta::Unbounded)
    }

    /// The cap as a value, if any.
    pub fn bound(self) -> Option<f64> {
        match self {
            Theta::Bounded(t) => Some(t),
            Theta::Unbounded => None,
        }
    }
}

/// The (λ₁, λ₂, λ₃, n, θ) parameterization of the map.
///
/// The additive scale λ₃ⁿ is precomputed once; with λ₃ = 0 the additive term
/// is identically zero regardless of n and the map is purely multiplicative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapCoefficients {
    lambda1: f64,
    lambda2: f64,
    lambda3: f64,
    n: f64,
    theta: Theta,
    additive: f64,
}

impl MapCoefficients {
    /// Validates and builds a coefficient set.
    ///
    /// The savings constraint λ₁ + λ₂ ≤ 1 is enforced only for unbounded
    /// additive maps (θ = ∞, λ₃ > 0), where the factor is interpreted as a
    /// savings propensity. Purely multiplicative maps (λ₃ = 0) legitimately
    /// run with factors above 1: the capped opinion map reaches 2λ and the
    /// proportionate-growth map reaches 2.
    pub fn new(lambda1: f64, lambda2: f64, lambda3: f64, n: f64, theta: Theta) -> Result<Self> {
        for (name, v) in [
            ("lambda1", lambda1),
            ("lambda2", lambda2),
            ("lambda3", lambda3),
        ] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidCoefficients(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        if !n.is_finite() || !(N_MIN..=1.0).contains(&n) {
            return Err(Error::InvalidCoefficients(format!(
                "n must lie in [{N_MIN}, 1], got {n}"
            )));
        }
        match theta {
            Theta::Bounded(t) if !(t.is_finite() && t > 0.0) => {
                return Err(Error::InvalidCoefficients(format!(
                    "theta must be positive and finite, got {t}"
                )));
            }
            Theta::Unbounded if lambda3 > 0.0 && lambda1 + lambda2 > 1.0 => {
                return Err(Error::InvalidCoefficients(format!(
                    "lambda1 + lambda2 = {} exceeds 1 for an unbounded additive map",
                    lambda1 + lambda2
                )));
            }
            _ => {}
        }
        let additive = if lambda3 == 0.0 { 0.0 } else { lambda3.powf(n) };
        if !additive.is_finite() {
            return Err(Error::InvalidCoefficients(format!(
                "additive scale lambda3^n = {lambda3}^{n} is not finite"
            )));
        }
        Ok(MapCoefficients {
            lambda1,
            lambda2,
            lambda3,
            n,
            theta,
            additive,
        })
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn lambda3(&self) -> f64 {
        self.lambda3
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    /// The precomputed additive scale λ₃ⁿ (0 when λ₃ = 0).
    pub fn additive_scale(&self) -> f64 {
        self.additive
    }

    /// True when the additive term vanishes and the map is a pure product.
    pub fn is_multiplicative(&self) -> bool {
        self.lambda3 == 0.0
    }

    /// True when the step needs a ξ draw (additive term present and noise
    /// not coupled).
    pub(crate) fn needs_xi(&self) -> bool {
        !self.is_multiplicative()
    }
}

/// One agent: current value, fixed savings/conviction parameter, and the
/// log-space shadow of `m`.
///
/// `log_m` equals ln(m) whenever m is a positive normal float; once the
/// direct value underflows, `m` reports 0 and `log_m` stays finite and
/// authoritative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    pub m: f64,
    pub lambda: f64,
    pub log_m: f64,
}

impl AgentState {
    pub fn new(m: f64, lambda: f64) -> Result<Self> {
        if !m.is_finite() || m < 0.0 {
            return Err(Error::InvalidState(format!(
                "m must be non-negative and finite, got {m}"
            )));
        }
        if !lambda.is_finite() || !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidState(format!(
                "lambda must lie in [0, 1], got {lambda}"
            )));
        }
        Ok(AgentState {
            m,
            lambda,
            log_m: m.ln(),
        })
    }

    /// The conventional initial condition m(0) = 1.
    pub fn unit(lambda: f64) -> Self {
        AgentState {
            m: 1.0,
            lambda,
            log_m: 0.0,
        }
    }
}

/// One step's noise: ε scales the multiplicative term, ξ the additive one.
/// When coupled, ξ is the same draw as ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseDraw {
    pub epsilon: f64,
    pub xi: f64,
    pub coupled: bool,
}

impl NoiseDraw {
    pub fn independent(epsilon: f64, xi: f64) -> Self {
        NoiseDraw {
            epsilon,
            xi,
            coupled: false,
        }
    }

    pub fn coupled(epsilon: f64) -> Self {
        NoiseDraw {
            epsilon,
            xi: epsilon,
            coupled: true,
        }
    }
}

/// Advance one agent by one step of the map. Pure function of its inputs.
///
/// Purely multiplicative maps (λ₃ = 0) also advance the log-space shadow by
/// the recurrence `log_m' = log(λ₁ + ε λ₂) + log_m` (capped at ln θ), which
/// is exact in log space; additive maps refresh the shadow from the direct
/// value instead.
pub fn step(state: &AgentState, coeffs: &MapCoefficients, noise: &NoiseDraw) -> AgentState {
    let factor = coeffs.lambda1 + noise.epsilon * coeffs.lambda2;
    if coeffs.is_multiplicative() {
        let mut log_m = state.log_m + factor.ln();
        if let Theta::Bounded(theta) = coeffs.theta {
            log_m = log_m.min(theta.ln());
        }
        let m = if state.m >= UNDERFLOW_LIMIT {
            // Direct track, switching to the shadow on underflow.
            let mut md = factor * state.m;
            if let Theta::Bounded(theta) = coeffs.theta {
                md = md.min(theta);
            }
            if md < UNDERFLOW_LIMIT {
                0.0
            } else {
                md
            }
        } else if log_m >= LN_UNDERFLOW_LIMIT {
            // Shadow track climbing back into direct range.
            log_m.exp()
        } else {
            0.0
        };
        AgentState {
            m,
            lambda: state.lambda,
            log_m,
        }
    } else {
        let mut m = factor * state.m + noise.xi * coeffs.additive;
        if let Theta::Bounded(theta) = coeffs.theta {
            m = m.min(theta);
        }
        AgentState {
            m,
            lambda: state.lambda,
            log_m: m.ln(),
        }
    }
}

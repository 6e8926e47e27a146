//! Closed-form reference values for the map's regimes, used by tests and
//! the CLI to cross-check simulation output.

use crate::error::{Error, Result};

/// Results above this magnitude are reported as overflow rather than
/// returned.
const OVERFLOW_GUARD: f64 = 1e300;

/// A reference value with the closed form it came from and its domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    pub source: &'static str,
    pub validity: &'static str,
}

/// Stationary mean of the skewed map (λ₁ = λ, λ₂ = λ₃ = 1−λ, n = 1):
/// taking expectations of both sides fixes ⟨m⟩ = 1 for every λ.
pub fn stationary_mean_skewed() -> f64 {
    1.0
}

/// Stationary variance of the skewed map with independent ε, ξ:
/// V(m) = (1−λ) / (2(2+λ)). Tends to 0 as λ → 1 (delta function).
pub fn stationary_variance_independent(lambda: f64) -> Result<f64> {
    check_unit_interval("lambda", lambda)?;
    Ok(0.5 * (1.0 - lambda) / (2.0 + lambda))
}

/// Stationary variance of the skewed map with coupled noise (ξ = ε), i.e.
/// m' = λm + ε(1−λ)(m+1): V(m) = (1−λ) / (2+λ), maximal at 1/2 for λ = 0.
pub fn stationary_variance_coupled(lambda: f64) -> Result<f64> {
    check_unit_interval("lambda", lambda)?;
    Ok((1.0 - lambda) / (2.0 + lambda))
}

/// Stationary mean of the power-law regime, from (1−λ)^(1−n) ⟨m⟩ = 1:
/// ⟨m⟩ = (1−λ)^(n−1). Guarded against overflow as λ → 1.
pub fn mean_power(lambda: f64, n: f64) -> Result<f64> {
    if !lambda.is_finite() || !(0.0..1.0).contains(&lambda) {
        return Err(Error::Domain(format!(
            "lambda must lie in [0, 1), got {lambda}"
        )));
    }
    if !n.is_finite() || n > 1.0 {
        return Err(Error::Domain(format!("n must satisfy n ≤ 1, got {n}")));
    }
    let value = (1.0 - lambda).powf(n - 1.0);
    if !value.is_finite() || value > OVERFLOW_GUARD {
        return Err(Error::Overflow(format!(
            "(1−λ)^(n−1) exceeds {OVERFLOW_GUARD:e} for lambda = {lambda}, n = {n}"
        )));
    }
    Ok(value)
}

/// Tail exponent of the pooled wealth density for uniformly distributed λ:
/// P(m) ~ m^(−(n−2)/(n−1)). Equals 2 at n = 0 and falls toward 1 as
/// n → −∞.
pub fn tail_exponent(n: f64) -> Result<f64> {
    if !n.is_finite() || n > 0.0 {
        return Err(Error::Domain(format!("n must satisfy n ≤ 0, got {n}")));
    }
    Ok((n - 2.0) / (n - 1.0))
}

/// ⟨log(1+ε)⟩ for ε uniform on [0, ε̄): ((1+ε̄)·ln(1+ε̄) − ε̄)/ε̄.
/// At ε̄ = 1 this is 2 ln 2 − 1.
pub fn mean_log_one_plus_eps(eps_max: f64) -> Result<f64> {
    if !eps_max.is_finite() || !(0.0 < eps_max && eps_max <= 1.0) {
        return Err(Error::Domain(format!(
            "eps_max must lie in (0, 1], got {eps_max}"
        )));
    }
    Ok(((1.0 + eps_max) * (1.0 + eps_max).ln() - eps_max) / eps_max)
}

/// Critical conviction of the capped product map: the root of
/// log λ + ⟨log(1+ε)⟩ = 0 with ⟨log(1+ε)⟩ = 2 log 2 − 1, i.e.
/// λ_c = exp(1 − 2 log 2) = e/4 ≈ 0.6795705. Jensen's inequality puts it
/// strictly above 2/3.
pub fn critical_lambda() -> f64 {
    std::f64::consts::E / 4.0
}

/// Named lookup used by the CLI; `params` are positional.
pub fn lookup(name: &str, params: &[f64]) -> Result<OracleValue> {
    let want = |k: usize| -> Result<()> {
        if params.len() != k {
            return Err(Error::Domain(format!(
                "oracle '{name}' takes {k} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(())
    };
    match name {
        "mean_skewed" => {
            want(0)?;
            Ok(OracleValue {
                value: stationary_mean_skewed(),
                source: "stationary mean of the skewed map: ⟨m⟩ = 1",
                validity: "0 ≤ λ ≤ 1",
            })
        }
        "variance_independent" => {
            want(1)?;
            Ok(OracleValue {
                value: stationary_variance_independent(params[0])?,
                source: "stationary variance, independent noise: V(m) = (1−λ)/(2(2+λ))",
                validity: "0 ≤ λ ≤ 1",
            })
        }
        "variance_coupled" => {
            want(1)?;
            Ok(OracleValue {
                value: stationary_variance_coupled(params[0])?,
                source: "stationary variance, coupled noise (ξ = ε): V(m) = (1−λ)/(2+λ)",
                validity: "0 ≤ λ ≤ 1",
            })
        }
        "mean_power" => {
            want(2)?;
            Ok(OracleValue {
                value: mean_power(params[0], params[1])?,
                source: "power-regime stationary mean: ⟨m⟩ = (1−λ)^(n−1)",
                validity: "0 ≤ λ < 1, n ≤ 1, result ≤ 1e300",
            })
        }
        "tail_exponent" => {
            want(1)?;
            Ok(OracleValue {
                value: tail_exponent(params[0])?,
                source: "pooled tail exponent for uniform λ: P(m) ~ m^(−(n−2)/(n−1))",
                validity: "n ≤ 0",
            })
        }
        "mean_log_one_plus_eps" => {
            want(1)?;
            Ok(OracleValue {
                value: mean_log_one_plus_eps(params[0])?,
                source: "⟨log(1+ε)⟩ for ε uniform on [0, ε̄): ((1+ε̄)ln(1+ε̄) − ε̄)/ε̄",
                validity: "0 < ε̄ ≤ 1",
            })
        }
        "critical_lambda" => {
            want(0)?;
            Ok(OracleValue {
                value: critical_lambda(),
                source: "critical conviction λ_c = e/4, root of log λ + ⟨log(1+ε)⟩",
                validity: "ε uniform on [0, 1)",
            })
        }
        _ => Err(Error::Domain(format!("unknown oracle '{name}'"))),
    }
}

/// Names accepted by [`lookup`], for help text.
pub const NAMES: &[&str] = &[
    "mean_skewed",
    "variance_independent",
    "variance_coupled",
    "mean_power",
    "tail_exponent",
    "mean_log_one_plus_eps",
    "critical_lambda",
];

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} must lie in [0, 1], got {v}")));
    }
    Ok(())
}

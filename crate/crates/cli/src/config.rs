//! Run configuration: a single JSON document validated against every
//! module precondition before any computation starts. Unknown keys are
//! rejected.

use serde::Deserialize;
use stochmap::analytics::{TailMethod, XminRule};
use stochmap::{LambdaScheme, Regime, SimulationPlan};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub regime: RegimeConfig,
    pub plan: PlanConfig,
    #[serde(default)]
    pub population: Option<PopulationConfig>,
    #[serde(default)]
    pub analytics: AnalyticsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeConfig {
    pub tag: RegimeTag,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub n: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeTag {
    SkewedIndependent,
    SkewedCoupled,
    PowerLaw,
    Opinion,
    Gibrat,
}

impl RegimeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTag::SkewedIndependent => "skewed_independent",
            RegimeTag::SkewedCoupled => "skewed_coupled",
            RegimeTag::PowerLaw => "power_law",
            RegimeTag::Opinion => "opinion",
            RegimeTag::Gibrat => "gibrat",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanConfig {
    pub seed: u64,
    #[serde(default = "default_burn_in")]
    pub burn_in: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_stride")]
    pub stride: u64,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
}

fn default_burn_in() -> u64 {
    SimulationPlan::DEFAULT_BURN_IN
}
fn default_samples() -> usize {
    SimulationPlan::DEFAULT_SAMPLES
}
fn default_stride() -> u64 {
    1
}
fn default_replicas() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationConfig {
    pub size: usize,
    pub scheme: SchemeConfig,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SchemeConfig {
    Constant { value: f64 },
    UniformRandom { lo: f64, hi: f64 },
    DeterministicRamp { lambda_max: f64 },
}

impl From<SchemeConfig> for LambdaScheme {
    fn from(s: SchemeConfig) -> Self {
        match s {
            SchemeConfig::Constant { value } => LambdaScheme::Constant { value },
            SchemeConfig::UniformRandom { lo, hi } => LambdaScheme::UniformRandom { lo, hi },
            SchemeConfig::DeterministicRamp { lambda_max } => {
                LambdaScheme::DeterministicRamp { lambda_max }
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticsConfig {
    #[serde(default = "default_bins")]
    pub histogram_bins: usize,
    #[serde(default)]
    pub binning: BinningConfig,
    #[serde(default)]
    pub fit_method: FitMethodConfig,
    #[serde(default)]
    pub xmin_quantile: Option<f64>,
    #[serde(default)]
    pub xmin_fixed: Option<f64>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
}

fn default_bins() -> usize {
    100
}

impl Default for AnalyticsConfig {
    fn default() -> Self {
        AnalyticsConfig {
            histogram_bins: default_bins(),
            binning: BinningConfig::Linear,
            fit_method: FitMethodConfig::Hill,
            xmin_quantile: None,
            xmin_fixed: None,
            sweep: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinningConfig {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethodConfig {
    #[default]
    Hill,
    LoglogRegression,
}

impl From<FitMethodConfig> for TailMethod {
    fn from(m: FitMethodConfig) -> Self {
        match m {
            FitMethodConfig::Hill => TailMethod::Hill,
            FitMethodConfig::LoglogRegression => TailMethod::LogLogRegression,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub grid_start: f64,
    pub grid_stop: f64,
    pub grid_step: f64,
    #[serde(default = "default_lyapunov_draws")]
    pub lyapunov_draws: u64,
}

fn default_lyapunov_draws() -> u64 {
    10_000_000
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<String>,
    /// When set, `simulate` also writes the pooled raw samples, one value
    /// per line, to this file (relative to the output directory).
    #[serde(default)]
    pub samples_file: Option<String>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.plan()?.validate().map_err(CliError::from_validation)?;
        match self.regime.tag {
            RegimeTag::Gibrat => {
                if self.regime.lambda.is_some() {
                    return Err(CliError::Config(
                        "regime.lambda is not accepted for tag 'gibrat'".into(),
                    ));
                }
            }
            tag => {
                if self.population.is_some() && self.regime.lambda.is_some() {
                    return Err(CliError::Config(
                        "regime.lambda conflicts with population.scheme; use one".into(),
                    ));
                }
                if self.population.is_none()
                    && self.regime.lambda.is_none()
                    && self.analytics.sweep.is_none()
                {
                    return Err(CliError::Config(format!(
                        "regime.lambda is required for tag '{}' without a population",
                        tag.as_str()
                    )));
                }
            }
        }
        match self.regime.tag {
            RegimeTag::PowerLaw => {
                if self.regime.n.is_none() {
                    return Err(CliError::Config(
                        "regime.n is required for tag 'power_law'".into(),
                    ));
                }
            }
            _ => {
                if self.regime.n.is_some() {
                    return Err(CliError::Config(format!(
                        "regime.n is only accepted for tag 'power_law', not '{}'",
                        self.regime.tag.as_str()
                    )));
                }
            }
        }
        if let Some(pop) = &self.population {
            if pop.size < 1 {
                return Err(CliError::Config(
                    "population.size must be at least 1".into(),
                ));
            }
            LambdaScheme::from(pop.scheme)
                .validate()
                .map_err(CliError::from_validation)?;
        }
        if self.analytics.histogram_bins < 1 {
            return Err(CliError::Config(
                "analytics.histogram_bins must be at least 1".into(),
            ));
        }
        if self.analytics.xmin_quantile.is_some() && self.analytics.xmin_fixed.is_some() {
            return Err(CliError::Config(
                "analytics.xmin_quantile and analytics.xmin_fixed are mutually exclusive".into(),
            ));
        }
        if let Some(q) = self.analytics.xmin_quantile {
            if !(0.0 < q && q < 1.0) {
                return Err(CliError::Config(format!(
                    "analytics.xmin_quantile must lie in (0, 1), got {q}"
                )));
            }
        }
        if let Some(v) = self.analytics.xmin_fixed {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Config(format!(
                    "analytics.xmin_fixed must be positive, got {v}"
                )));
            }
        }
        if let Some(sweep) = &self.analytics.sweep {
            if sweep.grid_start >= sweep.grid_stop
                || sweep.grid_step <= 0.0
                || !(0.0..1.0).contains(&sweep.grid_start)
                || !(0.0..1.0).contains(&sweep.grid_stop)
            {
                return Err(CliError::Config(
                    "analytics.sweep grid must satisfy 0 ≤ grid_start < grid_stop < 1 with grid_step > 0"
                        .into(),
                ));
            }
        }
        Ok(())
    }

    pub fn plan(&self) -> Result<SimulationPlan, CliError> {
        SimulationPlan::new(
            self.plan.seed,
            self.plan.burn_in,
            self.plan.samples,
            self.plan.stride,
            self.plan.replicas,
        )
        .map_err(CliError::from_validation)
    }

    /// The regime template: λ ↦ Regime for this tag.
    pub fn regime_template(&self) -> impl Fn(f64) -> Regime + Sync + '_ {
        let tag = self.regime.tag;
        let n = self.regime.n;
        move |lambda: f64| match tag {
            RegimeTag::SkewedIndependent => Regime::SkewedIndependent { lambda },
            RegimeTag::SkewedCoupled => Regime::SkewedCoupled { lambda },
            RegimeTag::PowerLaw => Regime::PowerLaw {
                lambda,
                n: n.unwrap_or(0.0),
            },
            RegimeTag::Opinion => Regime::Opinion { lambda },
            RegimeTag::Gibrat => Regime::Gibrat,
        }
    }

    pub fn xmin_rule(&self) -> XminRule {
        if let Some(v) = self.analytics.xmin_fixed {
            XminRule::Fixed(v)
        } else if let Some(q) = self.analytics.xmin_quantile {
            XminRule::Quantile(q)
        } else {
            XminRule::DEFAULT
        }
    }

    pub fn sweep_grid(&self) -> Result<Vec<f64>, CliError> {
        let sweep = self.analytics.sweep.as_ref().ok_or_else(|| {
            CliError::Config("analytics.sweep is required for the sweep command".into())
        })?;
        let mut grid = Vec::new();
        let mut i = 0u32;
        loop {
            let v = sweep.grid_start + sweep.grid_step * i as f64;
            if v > sweep.grid_stop + 1e-12 {
                break;
            }
            grid.push(v);
            i += 1;
        }
        if grid.len() < 2 {
            return Err(CliError::Config(
                "analytics.sweep grid has fewer than 2 points".into(),
            ));
        }
        Ok(grid)
    }
}

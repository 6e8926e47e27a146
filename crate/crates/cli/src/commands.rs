//! The four subcommands: simulate, sweep, fit, oracle.

use std::path::{Path, PathBuf};

use stochmap::analytics::{
    estimate_critical_lambda, fit_tail, histogram, moments, sweep_lambda, Binning, ORDER_THRESHOLD,
};
use stochmap::{build_population, evolve_replicas, AgentState, LambdaScheme, SimulationPlan};

use crate::config::{BinningConfig, RegimeTag, RunConfig};
use crate::output::{
    atomic_write, finite, histogram_csv, samples_text, sweep_csv, to_json_bytes, FitJson,
    SummaryJson, SweepJson,
};
use crate::CliError;

pub struct CommonArgs {
    pub config: PathBuf,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

fn load(common: &CommonArgs) -> Result<(RunConfig, SimulationPlan, PathBuf), CliError> {
    let mut config = RunConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        config.plan.seed = seed;
    }
    let plan = config.plan()?;
    let out_dir = common
        .out
        .clone()
        .or_else(|| config.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    Ok((config, plan, out_dir))
}

/// Pooled steady-state samples for the configured regime: population run
/// when a population is configured, otherwise `plan.replicas` chains of the
/// single-λ regime.
fn collect_samples(config: &RunConfig, plan: &SimulationPlan) -> Result<Vec<f64>, CliError> {
    let template = config.regime_template();
    if let Some(pop) = &config.population {
        let scheme: LambdaScheme = pop.scheme.into();
        let agents =
            build_population(pop.size, &scheme, plan.seed).map_err(CliError::from_validation)?;
        let coeffs = agents
            .iter()
            .map(|a| template(a.lambda).coefficients())
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::from_validation)?;
        let coupling = template(0.0).coupling();
        let chains = stochmap::evolve_population(&agents, &coeffs, coupling, plan);
        Ok(chains.iter().flatten().map(|s| s.m).collect())
    } else {
        let lambda = match config.regime.tag {
            RegimeTag::Gibrat => 1.0,
            _ => config.regime.lambda.ok_or_else(|| {
                CliError::Config(
                    "regime.lambda is required for simulate without a population".into(),
                )
            })?,
        };
        let regime = template(lambda);
        let coeffs = regime.coefficients().map_err(CliError::from_validation)?;
        let initial = AgentState::unit(lambda);
        let chains = evolve_replicas(&initial, &coeffs, regime.coupling(), plan);
        Ok(chains.iter().flatten().map(|s| s.m).collect())
    }
}

pub fn cmd_simulate(common: &CommonArgs) -> Result<(), CliError> {
    let (config, plan, out_dir) = load(common)?;
    let samples = collect_samples(&config, &plan)?;

    let summary = moments(&samples).map_err(CliError::from_validation)?;
    let binning = match config.analytics.binning {
        BinningConfig::Linear => Binning::Linear,
        BinningConfig::Log => Binning::Log,
    };
    let hist = histogram(&samples, config.analytics.histogram_bins, binning)
        .map_err(CliError::from_validation)?;

    atomic_write(&out_dir.join("hist.csv"), histogram_csv(&hist).as_bytes())?;
    let summary_json = SummaryJson {
        regime: config.regime.tag.as_str(),
        lambda: config.regime.lambda,
        n: config.regime.n,
        seed: plan.seed,
        count: summary.count,
        mean: finite(summary.mean),
        variance: finite(summary.variance),
        skewness: finite(summary.skewness),
        kurtosis: finite(summary.excess_kurtosis),
    };
    atomic_write(
        &out_dir.join("summary.json"),
        &to_json_bytes(&summary_json)?,
    )?;
    if let Some(name) = &config.output.samples_file {
        atomic_write(&out_dir.join(name), samples_text(&samples).as_bytes())?;
    }
    println!(
        "simulate: {} samples -> {}",
        summary.count,
        out_dir.display()
    );
    Ok(())
}

pub fn cmd_sweep(common: &CommonArgs) -> Result<(), CliError> {
    let (config, plan, out_dir) = load(common)?;
    if config.regime.tag == RegimeTag::Gibrat {
        return Err(CliError::Config(
            "sweep requires a lambda-parameterized regime tag".into(),
        ));
    }
    let grid = config.sweep_grid()?;
    let draws = config
        .analytics
        .sweep
        .as_ref()
        .expect("sweep_grid checked presence")
        .lyapunov_draws;
    let template = config.regime_template();
    let sweep = sweep_lambda(&template, &grid, &plan, draws).map_err(CliError::from_validation)?;
    let est =
        estimate_critical_lambda(&template, &sweep, &plan).map_err(CliError::from_validation)?;

    atomic_write(&out_dir.join("sweep.csv"), sweep_csv(&sweep).as_bytes())?;
    let sidecar = SweepJson {
        lambda_c_lyapunov: est.lambda_c_lyapunov,
        lambda_c_order: est.lambda_c_order,
        mean_log_one_plus_eps: sweep.mean_log_one_plus_eps,
        order_threshold: ORDER_THRESHOLD,
    };
    atomic_write(&out_dir.join("sweep.json"), &to_json_bytes(&sidecar)?)?;
    println!(
        "sweep: {} grid points -> {} (lambda_c_lyapunov = {})",
        grid.len(),
        out_dir.display(),
        est.lambda_c_lyapunov
    );
    Ok(())
}

pub fn cmd_fit(common: &CommonArgs, input: &Path) -> Result<(), CliError> {
    let (config, _plan, out_dir) = load(common)?;
    let text = std::fs::read_to_string(input)
        .map_err(|e| CliError::Io(format!("cannot read samples {}: {e}", input.display())))?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| {
            CliError::Config(format!(
                "{}:{}: not a number: {line:?}",
                input.display(),
                lineno + 1
            ))
        })?;
        samples.push(value);
    }
    let fit = fit_tail(
        &samples,
        config.xmin_rule(),
        config.analytics.fit_method.into(),
    )
    .map_err(CliError::from_validation)?;
    let json = to_json_bytes(&FitJson::from(&fit))?;
    atomic_write(&out_dir.join("fit.json"), &json)?;
    print!("{}", String::from_utf8_lossy(&json));
    Ok(())
}

pub fn cmd_oracle(name: &str, params: &[f64]) -> Result<(), CliError> {
    let value = stochmap::oracle::lookup(name, params).map_err(CliError::from_validation)?;
    println!(
        "{} — {} [valid: {}]",
        value.value, value.source, value.validity
    );
    Ok(())
}

//! One module per subcommand; [`run`] ties them to configuration and output.

mod chain;
mod collapse;
mod free_energy;
mod hc_curve;
mod regenset;
mod rn_check;
mod validate;

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use crate::config::{default_config, Experiment, RunConfig, MAX_TABLE};
use crate::error::{CliError, CliResult, ConfigError};
use crate::output::{write_record, ResultRecord, Table};

pub const COMMANDS: [&str; 7] = [
    "free-energy",
    "hc-curve",
    "collapse",
    "pipeline-chain",
    "regenset-sample",
    "rn-check",
    "validate",
];

/// Tables and failed gates produced by one experiment.
#[derive(Debug, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub fast: bool,
    /// Skip writing files.
    pub dry: bool,
}

fn experiment_name(command: &str) -> String {
    command.replace('-', "_")
}

/// Reads the configuration for `command`, or its built-in default.
pub fn load_config(command: &str, opts: &RunOptions) -> CliResult<RunConfig> {
    let name = experiment_name(command);
    let mut cfg = match &opts.config {
        Some(path) => {
            let src = fs::read_to_string(path)
                .map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&src).map_err(|mut e| {
                e.message = format!("{}: {}", path.display(), e.message);
                e
            })?
        }
        None => default_config(&name).ok_or_else(|| ConfigError::new("", format!("unknown command `{command}`")))?,
    };
    if cfg.experiment.name() != name && name != "validate" {
        return Err(ConfigError::new(
            "experiment.name",
            format!(
                "config describes `{}`, but the command is `{command}`",
                cfg.experiment.name()
            ),
        )
        .into());
    }
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &opts.out {
        cfg.output.dir = out.clone();
    }
    Ok(cfg)
}

fn check_resources(cfg: &RunConfig) -> CliResult<()> {
    let mut horizons = vec![cfg.model.horizon()];
    if let Experiment::Collapse(e) = &cfg.experiment {
        horizons.extend(e.laws.iter().flatten().map(|m| m.horizon()));
    }
    for h in horizons {
        if h > MAX_TABLE {
            return Err(CliError::Resource(format!(
                "renewal table of {h} entries exceeds the limit of {MAX_TABLE}"
            )));
        }
    }
    Ok(())
}

/// Runs the experiment described by `cfg`.
pub fn execute(command: &str, cfg: &RunConfig, fast: bool) -> CliResult<Outcome> {
    check_resources(cfg)?;
    if experiment_name(command) == "validate" {
        let fault = match &cfg.experiment {
            Experiment::Validate(v) => v.inject,
            _ => None,
        };
        return validate::run(cfg, fast, fault);
    }
    match &cfg.experiment {
        Experiment::FreeEnergy(e) => free_energy::run(cfg, e),
        Experiment::HcCurve(e) => hc_curve::run(cfg, e),
        Experiment::Collapse(e) => collapse::run(cfg, e),
        Experiment::PipelineChain(e) => chain::run(cfg, e),
        Experiment::RegensetSample(e) => regenset::run(cfg, e),
        Experiment::RnCheck(e) => rn_check::run(cfg, e),
        Experiment::Validate(v) => validate::run(cfg, fast, v.inject),
    }
}

/// Loads, runs and persists one command. Failed gates are reported in the
/// record, not as an error.
pub fn run(command: &str, opts: &RunOptions) -> CliResult<ResultRecord> {
    let start = Instant::now();
    let cfg = load_config(command, opts)?;
    let outcome = execute(command, &cfg, opts.fast)?;
    let rec = ResultRecord {
        experiment: experiment_name(command),
        library_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        tables: outcome.tables,
        failures: outcome.failures,
        wall_time_s: start.elapsed().as_secs_f64(),
        config: cfg,
    };
    if !opts.dry {
        write_record(&rec.config.output.dir, &rec)?;
    }
    Ok(rec)
}

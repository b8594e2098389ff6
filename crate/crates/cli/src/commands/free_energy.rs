use copolymer::discrete::{estimate_free_energy, estimate_free_energy_single, EstimateMode};

use super::Outcome;
use crate::config::{FreeEnergyExp, RunConfig};
use crate::error::CliResult;
use crate::output::{num, Table};

pub fn run(cfg: &RunConfig, e: &FreeEnergyExp) -> CliResult<Outcome> {
    let k = cfg.model.build()?;
    let d = cfg.disorder_law();
    let mut main = Table::new(
        "free_energy",
        &["lambda", "h", "N", "replicas", "f_hat", "stderr", "seed"],
    );
    let mut reps = Table::new(
        "free_energy_replicas",
        &["lambda", "h", "N", "seed", "replica", "f_replica"],
    );
    for p in cfg.params.points() {
        let est = match e.mode {
            EstimateMode::ReplicaAverage => estimate_free_energy(&k, &d, p, e.n, e.replicas, cfg.seed)?,
            EstimateMode::SingleTrajectory => estimate_free_energy_single(&k, &d, p, e.n, cfg.seed)?,
        };
        main.push(vec![
            num(p.lambda),
            num(p.h),
            est.n.to_string(),
            est.replicas.to_string(),
            num(est.value),
            num(est.stderr),
            cfg.seed.to_string(),
        ]);
        for (r, v) in est.samples.iter().enumerate() {
            reps.push(vec![
                num(p.lambda),
                num(p.h),
                est.n.to_string(),
                cfg.seed.to_string(),
                r.to_string(),
                num(*v),
            ]);
        }
    }
    Ok(Outcome {
        tables: vec![main, reps],
        failures: Vec::new(),
    })
}

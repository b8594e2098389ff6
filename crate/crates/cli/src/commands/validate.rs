use super::Outcome;
use crate::config::{Fault, RunConfig};
use crate::error::CliResult;
use crate::output::{num, Table};
use crate::suite::run_suite;

pub fn run(cfg: &RunConfig, fast: bool, fault: Option<Fault>) -> CliResult<Outcome> {
    let checks = run_suite(cfg, fast, fault)?;
    let mut t = Table::new(
        "validate",
        &[
            "module",
            "invariant",
            "kind",
            "passed",
            "statistic",
            "threshold",
            "seed",
            "detail",
        ],
    );
    let mut failures = Vec::new();
    for c in &checks {
        if !c.passed {
            failures.push(format!(
                "{}: {} (statistic {}, threshold {})",
                c.id(),
                c.detail,
                c.statistic,
                c.threshold
            ));
        }
        t.push(vec![
            c.module.clone(),
            c.name.clone(),
            if c.exact { "exact" } else { "statistical" }.into(),
            c.passed.to_string(),
            num(c.statistic),
            num(c.threshold),
            cfg.seed.to_string(),
            c.detail.clone(),
        ]);
    }
    Ok(Outcome {
        tables: vec![t],
        failures,
    })
}

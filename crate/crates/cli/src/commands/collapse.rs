use copolymer::continuum::estimate_continuum_free_energy;
use copolymer::discrete::{weak_coupling_point, FreeEnergyEstimate};

use super::Outcome;
use crate::config::{CollapseExp, RunConfig};
use crate::error::CliResult;
use crate::output::{num, Table};
use crate::suite::moments;

pub fn run(cfg: &RunConfig, e: &CollapseExp) -> CliResult<Outcome> {
    let specs = e.laws.clone().unwrap_or_else(|| vec![cfg.model.clone()]);
    let laws = specs.iter().map(|m| m.build()).collect::<copolymer::Result<Vec<_>>>()?;
    let d = cfg.disorder_law();
    let mut main = Table::new(
        "collapse",
        &[
            "law",
            "alpha",
            "lambda",
            "h",
            "a",
            "t",
            "N",
            "replicas",
            "seed",
            "value",
            "stderr",
            "continuum",
            "continuum_stderr",
        ],
    );
    let mut gaps = Table::new(
        "collapse_gaps",
        &["lambda", "h", "a", "t", "replicas", "seed", "gap", "gap_stderr", "pair"],
    );
    let mut failures = Vec::new();
    for p in cfg.params.points() {
        let mut reference = Vec::new();
        for k in &laws {
            let alpha = k.alpha();
            if !reference.iter().any(|(a, _): &(f64, FreeEnergyEstimate)| *a == alpha) {
                let c = estimate_continuum_free_energy(
                    alpha,
                    p,
                    e.t,
                    e.continuum_cells_per_unit,
                    e.continuum_replicas,
                    cfg.seed,
                )?;
                if c.value < -3.0 * c.stderr {
                    failures.push(format!(
                        "collapse: continuum reference {} +- {} at alpha = {alpha} is negative beyond 3 sigma",
                        c.value, c.stderr
                    ));
                }
                reference.push((alpha, c));
            }
        }
        for &a in &e.a_list {
            let mut ests = Vec::new();
            for (spec, k) in specs.iter().zip(&laws) {
                let est = weak_coupling_point(k, &d, p, a, e.t, e.replicas, cfg.seed)?;
                let c = &reference.iter().find(|(x, _)| *x == k.alpha()).expect("computed").1;
                main.push(vec![
                    spec.label(),
                    num(k.alpha()),
                    num(p.lambda),
                    num(p.h),
                    num(a),
                    num(e.t),
                    est.n.to_string(),
                    est.replicas.to_string(),
                    cfg.seed.to_string(),
                    num(est.value),
                    num(est.stderr),
                    num(c.value),
                    num(c.stderr),
                ]);
                ests.push((spec.label(), est));
            }
            if ests.len() < 2 {
                continue;
            }
            // Replica r sees the same charges under every law, so the paired
            // differences give the standard error of the gap.
            let mut best = (f64::NEG_INFINITY, 0.0, String::new());
            for i in 0..ests.len() {
                for j in i + 1..ests.len() {
                    let diffs: Vec<f64> = ests[i]
                        .1
                        .samples
                        .iter()
                        .zip(&ests[j].1.samples)
                        .map(|(x, y)| x - y)
                        .collect();
                    let (m, s) = moments(&diffs);
                    if m.abs() > best.0 {
                        best = (m.abs(), s, format!("{}|{}", ests[i].0, ests[j].0));
                    }
                }
            }
            gaps.push(vec![
                num(p.lambda),
                num(p.h),
                num(a),
                num(e.t),
                e.replicas.to_string(),
                cfg.seed.to_string(),
                num(best.0),
                num(best.1),
                best.2,
            ]);
        }
    }
    Ok(Outcome {
        tables: vec![main, gaps],
        failures,
    })
}

use copolymer::coarse::{pipeline_chain, ChainConfig};

use super::Outcome;
use crate::config::{PipelineChainExp, RunConfig};
use crate::error::CliResult;
use crate::output::{num, Table};

const STAGES: [&str; 5] = ["f0", "f1", "f2", "f3", "f4"];

pub fn run(cfg: &RunConfig, e: &PipelineChainExp) -> CliResult<Outcome> {
    let k = cfg.model.build()?;
    let d = cfg.disorder_law();
    let cc = ChainConfig {
        a: e.a,
        eps: e.eps,
        delta: e.delta,
        t: e.t,
        subcells: e.subcells,
        cells_per_block: e.cells_per_block,
        replicas: e.replicas,
        seed: cfg.seed,
        mc_cdf_samples: e.mc_cdf_samples,
    };
    let head = ["lambda", "h", "a", "eps", "delta", "t", "replicas", "seed"];
    let mut values = Table::new(
        "pipeline_chain",
        &[&head[..], &["N", "stage", "value", "stderr"]].concat(),
    );
    let mut gaps = Table::new(
        "pipeline_gaps",
        &[&head[..], &["pair", "gap", "stderr", "relative", "within_diagnostic"]].concat(),
    );
    let mut failures = Vec::new();
    for p in cfg.params.points() {
        let est = pipeline_chain(&k, &d, p, &cc)?;
        let meta = vec![
            num(p.lambda),
            num(p.h),
            num(e.a),
            num(e.eps),
            num(e.delta),
            num(e.t),
            e.replicas.to_string(),
            cfg.seed.to_string(),
        ];
        for (i, s) in STAGES.iter().enumerate() {
            let mut row = meta.clone();
            row.extend([
                est.fine_steps.to_string(),
                s.to_string(),
                num(est.values[i]),
                num(est.stderrs[i]),
            ]);
            values.push(row);
        }
        let scale = est.values[0].abs().max(est.values[4].abs());
        for i in 0..4 {
            let g = est.gaps[i];
            if !g.is_finite() {
                failures.push(format!(
                    "pipeline_chain: gap {}-{} is not finite at lambda = {}, h = {}",
                    STAGES[i],
                    STAGES[i + 1],
                    p.lambda,
                    p.h
                ));
            }
            let rel = if scale > 0.0 { g.abs() / scale } else { 0.0 };
            let mut row = meta.clone();
            row.extend([
                format!("{}-{}", STAGES[i], STAGES[i + 1]),
                num(g),
                num(est.gap_stderrs[i]),
                num(rel),
                (rel < 0.3).to_string(),
            ]);
            gaps.push(row);
        }
    }
    Ok(Outcome {
        tables: vec![values, gaps],
        failures,
    })
}

use copolymer::discrete::{estimate_hc, Detection};
use copolymer::model::hc_bounds;

use super::Outcome;
use crate::config::{HcCurveExp, RunConfig};
use crate::error::CliResult;
use crate::output::{num, Table};

pub fn run(cfg: &RunConfig, e: &HcCurveExp) -> CliResult<Outcome> {
    let k = cfg.model.build()?;
    let d = cfg.disorder_law();
    let detection = Detection {
        k_sigma: e.k_sigma,
        floor: e.floor,
    };
    let mut curve = Table::new(
        "hc_curve",
        &[
            "lambda",
            "h_lo",
            "h_hi",
            "lower_bound",
            "upper_bound",
            "N",
            "replicas",
            "seed",
            "within_bounds",
        ],
    );
    let mut probes = Table::new(
        "hc_probes",
        &["lambda", "h", "f_hat", "stderr", "localized", "N", "replicas", "seed"],
    );
    let mut failures = Vec::new();
    let mut lambdas: Vec<f64> = cfg.params.lambda.iter().copied().filter(|&l| l > 0.0).collect();
    lambdas.sort_by(f64::total_cmp);
    let n = e.n - e.n % k.period();
    let mut brackets: Vec<(f64, f64, f64)> = Vec::new();
    for &lambda in &lambdas {
        let meta = [n.to_string(), e.replicas.to_string(), cfg.seed.to_string()];
        match estimate_hc(&k, &d, lambda, e.n, e.replicas, cfg.seed, detection, e.resolution) {
            Ok(est) => {
                let slack = e.tolerance * lambda;
                let inside = est.h_lo >= est.lower_bound - slack && est.h_hi <= est.upper_bound + slack;
                if !inside {
                    failures.push(format!(
                        "hc_curve: bracket [{}, {}] at lambda = {lambda} leaves [{}, {}] widened by {slack}",
                        est.h_lo, est.h_hi, est.lower_bound, est.upper_bound
                    ));
                }
                let mut row = vec![
                    num(lambda),
                    num(est.h_lo),
                    num(est.h_hi),
                    num(est.lower_bound),
                    num(est.upper_bound),
                ];
                row.extend(meta.iter().cloned());
                row.push(inside.to_string());
                curve.push(row);
                for p in &est.probes {
                    let mut row = vec![
                        num(lambda),
                        num(p.h),
                        num(p.value),
                        num(p.stderr),
                        p.localized.to_string(),
                    ];
                    row.extend(meta.iter().cloned());
                    probes.push(row);
                }
                brackets.push((lambda, est.h_lo, est.h_hi));
            }
            Err(err @ copolymer::Error::BracketInvalid { .. }) => {
                let (lo, hi) = hc_bounds(lambda, k.alpha(), &d)?;
                failures.push(format!("hc_curve: lambda = {lambda}: {err}"));
                let mut row = vec![num(lambda), num(f64::NAN), num(f64::NAN), num(lo), num(hi)];
                row.extend(meta.iter().cloned());
                row.push("false".into());
                curve.push(row);
            }
            Err(err) => return Err(err.into()),
        }
    }
    for w in brackets.windows(2) {
        let ((l0, lo0, _), (l1, _, hi1)) = (w[0], w[1]);
        if hi1 < lo0 {
            failures.push(format!(
                "hc_curve: estimate decreases from lambda = {l0} (h >= {lo0}) to lambda = {l1} (h <= {hi1})"
            ));
        }
    }
    Ok(Outcome {
        tables: vec![curve, probes],
        failures,
    })
}

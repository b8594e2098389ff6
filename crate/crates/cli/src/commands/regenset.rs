use copolymer::continuum::sample_regenerative_excursions;
use copolymer::rng::rng_for;

use super::Outcome;
use crate::config::{RegensetExp, RunConfig};
use crate::error::CliResult;
use crate::output::{num, Table};

pub fn run(cfg: &RunConfig, e: &RegensetExp) -> CliResult<Outcome> {
    let alpha = cfg.model.alpha;
    let mut summary = Table::new(
        "regenset_summary",
        &[
            "sample",
            "seed",
            "alpha",
            "t",
            "eta",
            "gaps",
            "local_time",
            "drift_comp",
            "g_t",
            "d_t",
        ],
    );
    let mut gaps = Table::new("regenset_gaps", &["sample", "seed", "left", "right", "sign"]);
    let mut failures = Vec::new();
    for i in 0..e.samples {
        let mut rng = rng_for(cfg.seed, &[i as u64]);
        let exc = sample_regenerative_excursions(e.t, alpha, e.eta, &mut rng)?;
        if let Err(err) = exc.check_invariants() {
            failures.push(format!("regenset_sample: sample {i}: {err}"));
        }
        summary.push(vec![
            i.to_string(),
            cfg.seed.to_string(),
            num(alpha),
            num(e.t),
            num(e.eta),
            exc.gaps.len().to_string(),
            num(exc.local_time),
            num(exc.drift_comp),
            num(exc.last_point_before(e.t).unwrap_or(f64::NAN)),
            num(exc.first_point_after(e.t).unwrap_or(f64::NAN)),
        ]);
        for (&(l, r), &s) in exc.gaps.iter().zip(&exc.signs) {
            gaps.push(vec![i.to_string(), cfg.seed.to_string(), num(l), num(r), s.to_string()]);
        }
    }
    Ok(Outcome {
        tables: vec![summary, gaps],
        failures,
    })
}

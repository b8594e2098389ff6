use copolymer::coarse::{skeleton_log_rn_bound, RnReport};
use copolymer::model::renewal_mass_function;

use super::Outcome;
use crate::config::{RnCheckExp, RunConfig};
use crate::error::CliResult;
use crate::output::{num, Table};

pub fn run(cfg: &RunConfig, e: &RnCheckExp) -> CliResult<Outcome> {
    let k = cfg.model.build()?;
    let top = e.n_list.iter().copied().max().unwrap_or(0);
    let u = renewal_mass_function(&k, top)?;
    let mut ratios = Table::new("rn_ratio", &["n", "eps", "alpha", "y", "z", "j", "i", "ratio"]);
    let mut kappa = Table::new("rn_kappa", &["n", "eps", "alpha", "z", "g", "kappa"]);
    let mut failures = Vec::new();
    for &n in &e.n_list {
        let rep = RnReport::build(&k, &u, &e.ys, &e.zs, e.eps, n)?;
        for r in &rep.entries {
            if !(r.ratio.is_finite() && r.ratio > 0.0) {
                failures.push(format!(
                    "rn_check: ratio {} at n = {n}, y = {}, z = {}",
                    r.ratio, r.y, r.z
                ));
            }
            ratios.push(vec![
                n.to_string(),
                num(e.eps),
                num(k.alpha()),
                num(r.y),
                num(r.z),
                num(r.j_value),
                num(r.i_value),
                num(r.ratio),
            ]);
        }
        let kr = skeleton_log_rn_bound(&k, &u, &e.kappa_ys, &e.zs, e.eps, n)?;
        for row in &kr.rows {
            kappa.push(vec![
                n.to_string(),
                num(e.eps),
                num(k.alpha()),
                num(row.z),
                num(row.g),
                num(row.kappa),
            ]);
        }
    }
    Ok(Outcome {
        tables: vec![ratios, kappa],
        failures,
    })
}

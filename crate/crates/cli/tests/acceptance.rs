//! End-to-end acceptance checks. Prints one `[PASS]`/`[FAIL]` line per
//! criterion and exits nonzero if any fails.

use std::f64::consts::PI;
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng as _;
use statrs::function::beta::beta_reg;

use copolab::config::default_config;
use copolab::suite::{moments, scaling_statistic};
use copolab::{run, RunOptions};
use copolymer::coarse::{pipeline_chain, ChainConfig, RnReport};
use copolymer::continuum::{
    campbell_check, continuum_log_partition_keyed, d_cdf, estimate_continuum_free_energy, modified_partition,
    sample_last_zero, sample_regenerative_excursions, BrownianPath, SignMode, DEFAULT_GRID_M,
};
use copolymer::discrete::{
    brute_force_log_partition, estimate_free_energy, estimate_hc, log_partition_exact, probe_localization,
    restriction_bound, weak_coupling_point, Detection, DisorderSample,
};
use copolymer::model::{
    renewal_mass_function, CouplingParams, DisorderLaw, SlowlyVarying, TailShape, TailedRenewalLaw,
};
use copolymer::rng::{derive_seed, rng_for};
use copolymer::stats::ks_one_sample;

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn law(alpha: f64, sv: SlowlyVarying, n_max: usize) -> TailedRenewalLaw {
    TailedRenewalLaw::new(alpha, sv, n_max, 1, TailShape::Normalized).expect("law")
}

fn constant(alpha: f64, n_max: usize) -> TailedRenewalLaw {
    law(alpha, SlowlyVarying::Constant { c: 1.0 }, n_max)
}

fn params(lambda: f64, h: f64) -> CouplingParams {
    CouplingParams::new(lambda, h).expect("params")
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let laws: Vec<_> = [0.3, 0.5, 0.8].iter().map(|&a| constant(a, 100)).collect();
    let mut rng = rng_for(SEED, &[1]);
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let k = &laws[rng.random_range(0..3)];
        let n = rng.random_range(1..=14);
        let w = DisorderSample::generate(&DisorderLaw::gaussian(), n, derive_seed(SEED, &[1, i]));
        let p = params(rng.random_range(0.0..=2.0), rng.random_range(0.0..=1.0));
        let dp = log_partition_exact(&w, k, p).unwrap().log_z;
        let bf = brute_force_log_partition(&w, k, p, n).unwrap();
        worst = worst.max((dp - bf).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-10 && secs < 10.0,
        format!("max |dp - enumeration| = {worst:.2e} over 100 instances, {secs:.1} s"),
    )
}

fn lambda_zero() -> Outcome {
    let d = DisorderLaw::gaussian();
    let k = constant(0.5, 2000);
    let mut vals = Vec::new();
    for (i, &h) in [0.0, 0.4, 1.7].iter().enumerate() {
        let p = params(0.0, h);
        let w = DisorderSample::generate(&d, 500, derive_seed(SEED, &[2, i as u64]));
        vals.push(log_partition_exact(&w, &k, p).unwrap().log_z);
        vals.push(estimate_free_energy(&k, &d, p, 500, 4, SEED).unwrap().value);
        vals.push(weak_coupling_point(&k, &d, p, 0.5, 100.0, 4, SEED).unwrap().value);
        let mut rng = rng_for(SEED, &[2, 100 + i as u64]);
        for s in 0..20 {
            let e = sample_regenerative_excursions(5.0, 0.5, 1e-3, &mut rng).unwrap();
            vals.push(continuum_log_partition_keyed(&e, p, SignMode::AnalyticAverage, s).log_z);
        }
        vals.push(
            estimate_continuum_free_energy(0.5, p, 20.0, 4.0, 4, SEED)
                .unwrap()
                .value,
        );
        let cc = ChainConfig {
            a: 0.5,
            eps: 0.25,
            delta: 0.5,
            t: 4.0,
            subcells: 4,
            cells_per_block: 2,
            replicas: 2,
            seed: SEED,
            mc_cdf_samples: 1000,
        };
        vals.extend(pipeline_chain(&k, &d, p, &cc).unwrap().values);
    }
    let nonzero = vals.iter().filter(|v| **v != 0.0).count();
    outcome(
        nonzero == 0,
        format!("{nonzero} of {} values differ from 0", vals.len()),
    )
}

fn restriction() -> Outcome {
    let k = constant(0.5, 400);
    let mut rng = rng_for(SEED, &[3]);
    let mut violations = 0usize;
    for i in 0..10_000u64 {
        let n = rng.random_range(1..=300);
        let w = DisorderSample::generate(&DisorderLaw::gaussian(), n, derive_seed(SEED, &[3, i]));
        let p = params(rng.random_range(0.0..3.0), rng.random_range(0.0..2.0));
        if log_partition_exact(&w, &k, p).unwrap().log_z < restriction_bound(&k, n) {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("{violations} violations in 10000 runs"))
}

fn monotone_in_h() -> Outcome {
    let k = constant(0.5, 400);
    let mut rng = rng_for(SEED, &[4]);
    let mut violations = 0usize;
    for i in 0..100u64 {
        let n = rng.random_range(1..=300);
        let w = DisorderSample::generate(&DisorderLaw::gaussian(), n, derive_seed(SEED, &[4, i]));
        let lambda = rng.random_range(0.05..2.0);
        let z: Vec<f64> = (0..=8)
            .map(|j| {
                log_partition_exact(&w, &k, params(lambda, 0.25 * j as f64))
                    .unwrap()
                    .log_z
            })
            .collect();
        violations += z.windows(2).filter(|p| p[1] > p[0]).count();
    }
    outcome(violations == 0, format!("{violations} violations over 100 instances"))
}

fn arcsine() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut worst: f64 = 0.0;
    for (i, &alpha) in [0.3, 0.5, 0.8].iter().enumerate() {
        let mut rng = rng_for(SEED, &[5, i as u64]);
        let eta = 10f64.powf(-3.0 / alpha).min(1e-4);
        let g: Vec<f64> = (0..100_000)
            .map(|_| sample_last_zero(1.0, alpha, eta, &mut rng).unwrap())
            .collect();
        let ks = ks_one_sample(&g, |y| beta_reg(alpha, 1.0 - alpha, y.clamp(0.0, 1.0)));
        worst = worst.max(ks);
        notes.push(format!("alpha {alpha}: {ks:.4}"));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 0.01 && secs < 30.0,
        format!("KS {}, {secs:.1} s", notes.join(", ")),
    )
}

fn d_law() -> Outcome {
    let mut rng = rng_for(SEED, &[6]);
    let n = 100_000;
    let hits = (0..n)
        .filter(|_| {
            let e = sample_regenerative_excursions(1.0, 0.5, 1e-4, &mut rng).unwrap();
            e.first_point_after(1.0).unwrap() <= 2.0
        })
        .count();
    let p = hits as f64 / n as f64;
    let exact = d_cdf(0.0, 1.0, 0.5, 2.0);
    outcome(
        (p - 0.5).abs() <= 0.01,
        format!("P(d_1 <= 2) = {p:.4}, closed form {exact:.6}"),
    )
}

fn renewal_identity() -> Outcome {
    let start = Instant::now();
    let laws = [
        constant(0.5, 10_000),
        law(0.3, SlowlyVarying::LogPower { a: 1.0 }, 10_000),
        TailedRenewalLaw::new(0.8, SlowlyVarying::Constant { c: 0.7 }, 5_000, 2, TailShape::HeadAtom).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for k in &laws {
        let u = renewal_mass_function(k, 10_000).unwrap();
        for m in 0..=10_000 {
            worst = worst.max((u.last_renewal_sum(k, m) - 1.0).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-10 && secs < 60.0,
        format!("max |sum - 1| = {worst:.2e} over N <= 1e4, three laws, {secs:.1} s"),
    )
}

fn doney() -> Outcome {
    let alpha = 0.5;
    let k = constant(alpha, 10_000);
    let u = renewal_mass_function(&k, 10_000).unwrap();
    let r: Vec<f64> = [100usize, 1000, 10_000]
        .iter()
        .map(|&l| {
            let x = l as f64;
            u.u(l) * k.l_eff(x) * x.powf(1.0 - alpha) * PI / (alpha * (PI * alpha).sin())
        })
        .collect();
    let dev: Vec<f64> = r.iter().map(|x| (x - 1.0).abs()).collect();
    outcome(
        dev[2] <= 0.1 && dev[0] > dev[1] && dev[1] > dev[2],
        format!("ratios {:.5}, {:.5}, {:.5}", r[0], r[1], r[2]),
    )
}

fn rn_ratio() -> Outcome {
    let start = Instant::now();
    let k = constant(0.5, 60_000);
    let u = renewal_mass_function(&k, 10_000).unwrap();
    let (ys, zs) = ([0.0, 0.1, 0.3], [1.0, 2.0, 5.0]);
    let fine = RnReport::build(&k, &u, &ys, &zs, 0.2, 10_000).unwrap();
    let coarse = RnReport::build(&k, &u, &ys, &zs, 0.2, 1000).unwrap();
    let worst = fine.entries.iter().map(|e| (e.ratio - 1.0).abs()).fold(0.0, f64::max);
    let improved = fine
        .entries
        .iter()
        .zip(&coarse.entries)
        .filter(|(f, c)| (f.ratio - 1.0).abs() < (c.ratio - 1.0).abs())
        .count();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 0.1 && improved >= 7 && secs < 300.0,
        format!("max |J/I - 1| = {worst:.4} at n = 1e4, improved on {improved}/9, {secs:.1} s"),
    )
}

fn campbell() -> Outcome {
    let mut rng = rng_for(SEED, &[10]);
    let r = campbell_check(0.1, 0.25, 1.0, 0.5, 10_000, &mut rng).unwrap();
    let z = (r.mc_mean - r.analytic).abs() / r.mc_stderr;
    outcome(
        z <= 3.0,
        format!(
            "MC {:.6} +- {:.6}, analytic {:.6} ({z:.2} sigma)",
            r.mc_mean, r.mc_stderr, r.analytic
        ),
    )
}

fn scaling() -> Outcome {
    let (diff, s) = scaling_statistic(derive_seed(SEED, &[11]), 2000, 800);
    outcome(
        diff.abs() <= 3.0 * s,
        format!("difference {diff:.4e}, combined stderr {s:.4e}"),
    )
}

fn critical_curve() -> Outcome {
    let start = Instant::now();
    let d = DisorderLaw::gaussian();
    let k = constant(0.5, 20_000);
    let det = Detection::default();
    let hc = estimate_hc(&k, &d, 1.0, 20_000, 64, SEED, det, 0.02).unwrap();
    let (lo, hi) = (hc.lower_bound - 0.05, hc.upper_bound + 0.05);
    let meets = hc.h_lo <= hi && hc.h_hi >= lo;
    let deep_lo = probe_localization(&k, &d, 1.0, 0.3, 20_000, 64, SEED, det).unwrap();
    let deep_hi = probe_localization(&k, &d, 1.0, 2.0, 20_000, 64, SEED, det).unwrap();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        meets && deep_lo.localized && !deep_hi.localized && secs < 600.0,
        format!(
            "bracket [{:.4}, {:.4}] vs [{lo:.4}, {hi:.4}]; f(0.3) = {:.3e} +- {:.1e}, f(2) = {:.3e} +- {:.1e}; {secs:.0} s",
            hc.h_lo, hc.h_hi, deep_lo.value, deep_lo.stderr, deep_hi.value, deep_hi.stderr
        ),
    )
}

fn universality() -> Outcome {
    let start = Instant::now();
    let d = DisorderLaw::gaussian();
    let laws = [constant(0.5, 4000), law(0.5, SlowlyVarying::LogPower { a: 1.0 }, 4000)];
    let p = params(1.0, 0.4);
    let mut rows = Vec::new();
    for &a in &[0.5, 0.35, 0.25] {
        let e: Vec<_> = laws
            .iter()
            .map(|k| weak_coupling_point(k, &d, p, a, 200.0, 128, SEED).unwrap())
            .collect();
        let diffs: Vec<f64> = e[0].samples.iter().zip(&e[1].samples).map(|(x, y)| x - y).collect();
        let (gap, se) = moments(&diffs);
        let mean = 0.5 * (e[0].value + e[1].value);
        rows.push((a, gap.abs(), se, mean));
    }
    let (first, last) = (rows[0], rows[2]);
    let rel = last.1 / last.3.abs();
    let secs = start.elapsed().as_secs_f64();
    let table: Vec<String> = rows
        .iter()
        .map(|r| format!("a {}: {:.4} +- {:.4}", r.0, r.1, r.2))
        .collect();
    outcome(
        last.1 < first.1 && rel <= 0.15 && secs < 1800.0,
        format!("gaps {}; relative gap at a = 0.25 is {rel:.3}", table.join(", ")),
    )
}

fn super_additivity() -> Outcome {
    let p = params(1.0, 0.4);
    let mut pass = 0;
    for i in 0..20u64 {
        let mut rng = rng_for(SEED, &[14, i]);
        let r = rng.random_range(1.0..3.0);
        let s = r + rng.random_range(1.0..4.0);
        let t = s + rng.random_range(1.0..4.0);
        let mut beta = BrownianPath::new(derive_seed(SEED, &[14, i, 1]));
        let seed = derive_seed(SEED, &[14, i, 2]);
        let mut est =
            |x: f64, y: f64| modified_partition(&mut beta, x, y, DEFAULT_GRID_M, p, 0.5, 1e-3, 400, seed).unwrap();
        let (rt, rs, st) = (est(r, t), est(r, s), est(s, t));
        let sigma = (rt.stderr.powi(2) + (st.value * rs.stderr).powi(2) + (rs.value * st.stderr).powi(2)).sqrt();
        if rt.value >= rs.value * st.value - 3.0 * sigma {
            pass += 1;
        }
    }
    outcome(pass >= 18, format!("{pass}/20 triples"))
}

fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("validate.json");
    fs::write(
        &path,
        serde_json::to_string_pretty(&default_config("validate").unwrap()).unwrap(),
    )
    .unwrap();
    let out = dir.path().join("out");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let opts = RunOptions {
            config: Some(path.clone()),
            out: Some(out.clone()),
            ..Default::default()
        };
        let rec = run("validate", &opts).unwrap();
        let csv = fs::read(out.join("validate.csv")).unwrap();
        runs.push((rec.body(), csv, rec.failures.len()));
    }
    let same = runs[0].0 == runs[1].0 && runs[0].1 == runs[1].1;
    outcome(
        same,
        format!("bodies identical: {same}; failed checks per run: {}", runs[0].2),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 15] = [
        ("oracle equivalence", oracle_equivalence),
        ("zero coupling", lambda_zero),
        ("restriction bound", restriction),
        ("monotone in h", monotone_in_h),
        ("arcsine law", arcsine),
        ("first return after 1", d_law),
        ("renewal identity", renewal_identity),
        ("renewal asymptotic", doney),
        ("return-law ratio", rn_ratio),
        ("campbell formula", campbell),
        ("continuum scaling", scaling),
        ("critical curve bounds", critical_curve),
        ("universality trend", universality),
        ("super-additivity", super_additivity),
        ("reproducibility", reproducibility),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = format!("{:02}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|x| *x == id || name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        println!(
            "[{tag}] {id} {name}: {} ({:.1} s)",
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}

//! The invariant suite run by `validate`.
//!
//! Exact checks have no sampling tolerance and make up the `--fast` subset;
//! statistical checks compare Monte Carlo output with closed forms.

use std::f64::consts::PI;

use rand::{Rng as _, SeedableRng};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use copolymer::coarse::{
    coarse_grain_continuum, coarse_grain_discrete, coarse_grained_hamiltonian_discrete, pipeline_chain,
    skeleton_log_rn_bound, skorohod_pair, step1_mismatch, BlockSumLaw, ChainConfig, RnReport, Skeleton,
};
use copolymer::continuum::{
    campbell_check, continuum_log_partition_keyed, estimate_continuum_free_energy, gap_increment, sample_last_zero,
    sample_regenerative_excursions, SignMode,
};
use copolymer::discrete::{
    brute_force_log_partition, estimate_free_energy, log_partition_exact, restriction_bound, sample_path,
    weak_coupling_point, DisorderSample,
};
use copolymer::model::{
    hc_bounds, renewal_mass_function, CouplingParams, DisorderLaw, SlowlyVarying, TailShape, TailedRenewalLaw,
};
use copolymer::numerics::tanh_sinh;
use copolymer::rng::{derive_seed, rng_for, Rng};
use copolymer::stats::{ks_one_sample, ks_two_sample, Moments};

use crate::config::{Fault, RunConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub module: String,
    pub name: String,
    pub exact: bool,
    pub passed: bool,
    pub statistic: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    pub fn id(&self) -> String {
        format!("{}.{}", self.module, self.name)
    }
}

/// Outcome of one check: statistic, threshold, verdict and a note.
struct Verdict {
    statistic: f64,
    threshold: f64,
    passed: bool,
    detail: String,
}

impl Verdict {
    fn at_most(statistic: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            statistic,
            threshold,
            passed: statistic <= threshold,
            detail: detail.into(),
        }
    }

    fn failed(detail: impl Into<String>) -> Self {
        Self {
            statistic: f64::NAN,
            threshold: f64::NAN,
            passed: false,
            detail: detail.into(),
        }
    }
}

struct Ctx {
    seed: u64,
    law: TailedRenewalLaw,
}

impl Ctx {
    fn rng(&self, id: u64) -> Rng {
        rng_for(self.seed, &[id])
    }
}

type CheckFn = fn(&Ctx) -> Verdict;

const ENTRIES: &[(&str, &str, bool, CheckFn)] = &[
    ("renewal", "normalization", true, normalization),
    ("renewal", "identity", true, renewal_identity),
    ("renewal", "doney", true, doney),
    ("model", "hc_bounds_order", true, hc_bounds_order),
    ("discrete", "oracle", true, oracle),
    ("discrete", "monotone_in_h", true, monotone_in_h),
    ("discrete", "restriction_bound", true, restriction),
    ("discrete", "determinism", true, determinism),
    ("discrete", "lambda_zero", true, discrete_lambda_zero),
    ("continuum", "lambda_zero", true, continuum_lambda_zero),
    ("continuum", "cutoff_consistency", true, cutoff_consistency),
    ("coarse", "skip_rule", true, skip_rule),
    ("coarse", "comonotone", true, comonotone),
    ("coarse", "rn_determinism", true, rn_determinism),
    ("coarse", "step1_bound", true, step1_bound),
    ("coarse", "rn_ratio", true, rn_ratio_grid),
    ("coarse", "lambda_zero", true, chain_lambda_zero),
    ("continuum", "arcsine", false, arcsine),
    ("continuum", "d_law", false, d_law),
    ("continuum", "regenerative", false, regenerative),
    ("continuum", "campbell", false, campbell),
    ("continuum", "scaling", false, scaling),
    ("coarse", "marginal", false, marginal),
];

/// Names of all suite entries, `module.name`.
pub fn entry_ids() -> Vec<String> {
    ENTRIES.iter().map(|(m, n, _, _)| format!("{m}.{n}")).collect()
}

pub fn run_suite(cfg: &RunConfig, fast: bool, fault: Option<Fault>) -> copolymer::Result<Vec<Check>> {
    let mut law = cfg.model.build()?;
    if let Some(Fault::CorruptKTable) = fault {
        let t = law.period();
        let v = law.k(t);
        law = law.with_corrupted_k(t, 1.5 * v);
    }
    let ctx = Ctx { seed: cfg.seed, law };
    Ok(ENTRIES
        .iter()
        .filter(|e| !fast || e.2)
        .map(|&(module, name, exact, f)| {
            let v = f(&ctx);
            Check {
                module: module.into(),
                name: name.into(),
                exact,
                passed: v.passed,
                statistic: v.statistic,
                threshold: v.threshold,
                detail: v.detail,
            }
        })
        .collect())
}

fn standard_laws() -> Vec<TailedRenewalLaw> {
    vec![
        TailedRenewalLaw::new(
            0.5,
            SlowlyVarying::Constant { c: 1.0 },
            10_000,
            1,
            TailShape::Normalized,
        ),
        TailedRenewalLaw::new(
            0.3,
            SlowlyVarying::LogPower { a: 1.0 },
            10_000,
            1,
            TailShape::Normalized,
        ),
        TailedRenewalLaw::new(
            0.5,
            SlowlyVarying::Constant { c: (2.0 / PI).sqrt() },
            5_000,
            2,
            TailShape::HeadAtom,
        ),
    ]
    .into_iter()
    .map(|k| k.expect("standard law"))
    .collect()
}

fn law(alpha: f64, n_max: usize) -> TailedRenewalLaw {
    TailedRenewalLaw::new(
        alpha,
        SlowlyVarying::Constant { c: 1.0 },
        n_max,
        1,
        TailShape::Normalized,
    )
    .expect("law")
}

fn normalization(ctx: &Ctx) -> Verdict {
    let mut worst: f64 = 0.0;
    let mut first_error = None;
    for (i, k) in std::iter::once(ctx.law.clone()).chain(standard_laws()).enumerate() {
        let total: f64 = k.k_table().iter().sum::<f64>() + k.tail(k.horizon());
        worst = worst.max((total - 1.0).abs());
        if let Err(e) = k.check_invariants() {
            first_error.get_or_insert(format!("law {i}: {e}"));
        }
    }
    let mut v = Verdict::at_most(worst, 1e-12, first_error.clone().unwrap_or_default());
    v.passed &= first_error.is_none();
    v
}

fn renewal_identity(ctx: &Ctx) -> Verdict {
    let mut worst: f64 = 0.0;
    for k in std::iter::once(ctx.law.clone()).chain(standard_laws()) {
        let n = 10_000.min(k.horizon());
        let u = match renewal_mass_function(&k, n) {
            Ok(u) => u,
            Err(e) => return Verdict::failed(e.to_string()),
        };
        for m in (0..=n).step_by(97).chain(std::iter::once(n)) {
            worst = worst.max((u.last_renewal_sum(&k, m) - 1.0).abs());
        }
    }
    Verdict::at_most(worst, 1e-10, "max |sum U(n) tail(N-n) - 1|, N <= 1e4")
}

/// `r(ℓ) = U(ℓ)·L(ℓ)·ℓ^{1−α}·π/(α sin πα)` at ℓ = 10², 10³, 10⁴.
fn doney(_: &Ctx) -> Verdict {
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    let mut ok = true;
    for &alpha in &[0.3, 0.5, 0.8] {
        let k = law(alpha, 10_000);
        let u = renewal_mass_function(&k, 10_000).expect("horizon");
        let d: Vec<f64> = [100usize, 1000, 10_000]
            .iter()
            .map(|&l| {
                let x = l as f64;
                (u.u(l) * k.l_eff(x) * x.powf(1.0 - alpha) * PI / (alpha * (PI * alpha).sin()) - 1.0).abs()
            })
            .collect();
        ok &= d[0] > d[1] && d[1] > d[2];
        if alpha <= 0.5 {
            worst = worst.max(d[2]);
        } else {
            let rate = 10f64.powf(alpha - 1.0);
            for w in d.windows(2) {
                ok &= (w[1] / w[0] / rate - 1.0).abs() < 0.15;
            }
        }
        notes.push(format!("a={alpha}: {:.4}", d[2]));
    }
    let mut v = Verdict::at_most(worst, 0.1, notes.join("; "));
    v.passed &= ok;
    v
}

fn hc_bounds_order(_: &Ctx) -> Verdict {
    let fs = DisorderLaw::finite_support(vec![-2.0, 0.5], vec![0.2, 0.8]).expect("law");
    let mut worst = f64::NEG_INFINITY;
    for d in [DisorderLaw::gaussian(), DisorderLaw::binary(), fs] {
        for &alpha in &[0.05, 0.3, 0.5, 0.8, 0.99] {
            for &lambda in &[0.01, 0.1, 0.5, 1.0, 2.0] {
                match hc_bounds(lambda, alpha, &d) {
                    Ok((lo, hi)) => worst = worst.max(lo - hi),
                    Err(e) => return Verdict::failed(e.to_string()),
                }
            }
        }
    }
    Verdict::at_most(worst, 0.0, "max(lower - upper)")
}

fn oracle(ctx: &Ctx) -> Verdict {
    let laws: Vec<_> = [0.3, 0.5, 0.8].iter().map(|&a| law(a, 100)).collect();
    let mut rng = ctx.rng(5);
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let k = &laws[rng.random_range(0..3)];
        let n = rng.random_range(1..=14);
        let w = DisorderSample::generate(&DisorderLaw::gaussian(), n, derive_seed(ctx.seed, &[5, i]));
        let p = CouplingParams::new(rng.random_range(0.0..2.0), rng.random_range(0.0..1.0)).expect("params");
        let dp = log_partition_exact(&w, k, p).expect("dp").log_z;
        let bf = brute_force_log_partition(&w, k, p, n).expect("enumeration");
        worst = worst.max((dp - bf).abs());
    }
    Verdict::at_most(worst, 1e-10, "100 instances, N <= 14")
}

fn monotone_in_h(ctx: &Ctx) -> Verdict {
    let k = law(0.5, 400);
    let mut rng = ctx.rng(6);
    let mut violations = 0usize;
    for i in 0..100u64 {
        let n = rng.random_range(1..=300);
        let w = DisorderSample::generate(&DisorderLaw::gaussian(), n, derive_seed(ctx.seed, &[6, i]));
        let lambda = rng.random_range(0.05..2.0);
        let z: Vec<f64> = (0..=8)
            .map(|j| {
                log_partition_exact(&w, &k, CouplingParams::new(lambda, 0.25 * j as f64).unwrap())
                    .unwrap()
                    .log_z
            })
            .collect();
        violations += z.windows(2).filter(|p| p[1] > p[0]).count();
    }
    Verdict::at_most(violations as f64, 0.0, "violations over h = 0, 0.25, ..., 2")
}

fn restriction(ctx: &Ctx) -> Verdict {
    let k = law(0.5, 400);
    let mut rng = ctx.rng(7);
    let mut violations = 0usize;
    for i in 0..2000u64 {
        let n = rng.random_range(1..=300);
        let w = DisorderSample::generate(&DisorderLaw::gaussian(), n, derive_seed(ctx.seed, &[7, i]));
        let p = CouplingParams::new(rng.random_range(0.0..3.0), rng.random_range(0.0..2.0)).unwrap();
        if log_partition_exact(&w, &k, p).unwrap().log_z < restriction_bound(&k, n) {
            violations += 1;
        }
    }
    Verdict::at_most(violations as f64, 0.0, "2000 runs")
}

fn determinism(ctx: &Ctx) -> Verdict {
    let n = 500.min(ctx.law.horizon());
    let d = DisorderLaw::gaussian();
    let p = CouplingParams::new(1.0, 0.4).unwrap();
    let run = || estimate_free_energy(&ctx.law, &d, p, n, 8, ctx.seed);
    match (run(), run()) {
        (Ok(a), Ok(b)) => {
            let same = a
                .samples
                .iter()
                .zip(&b.samples)
                .all(|(x, y)| x.to_bits() == y.to_bits());
            Verdict::at_most(f64::from(u8::from(!same)), 0.0, "bitwise replica streams")
        }
        (Err(e), _) | (_, Err(e)) => Verdict::failed(e.to_string()),
    }
}

fn discrete_lambda_zero(ctx: &Ctx) -> Verdict {
    let k = law(0.5, 1000);
    let d = DisorderLaw::gaussian();
    let p = CouplingParams::new(0.0, 0.7).unwrap();
    let w = DisorderSample::generate(&d, 300, ctx.seed);
    let vals = [
        log_partition_exact(&w, &k, p).unwrap().log_z,
        estimate_free_energy(&k, &d, p, 300, 4, ctx.seed).unwrap().value,
        weak_coupling_point(&k, &d, p, 0.5, 100.0, 4, ctx.seed).unwrap().value,
    ];
    let worst = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Verdict::at_most(worst, 0.0, "exact zero")
}

fn continuum_lambda_zero(ctx: &Ctx) -> Verdict {
    let p = CouplingParams::new(0.0, 0.7).unwrap();
    let mut rng = ctx.rng(9);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let e = sample_regenerative_excursions(5.0, 0.5, 1e-3, &mut rng).unwrap();
        worst = worst.max(
            continuum_log_partition_keyed(&e, p, SignMode::AnalyticAverage, rng.random())
                .log_z
                .abs(),
        );
    }
    let grid = estimate_continuum_free_energy(0.5, p, 10.0, 8.0, 4, ctx.seed).unwrap();
    worst = worst.max(grid.value.abs());
    Verdict::at_most(worst, 0.0, "exact zero")
}

fn chain_lambda_zero(ctx: &Ctx) -> Verdict {
    let k = law(0.5, 1000);
    let cfg = ChainConfig {
        a: 0.5,
        eps: 0.25,
        delta: 0.5,
        t: 4.0,
        subcells: 4,
        cells_per_block: 2,
        replicas: 2,
        seed: ctx.seed,
        mc_cdf_samples: 1000,
    };
    match pipeline_chain(
        &k,
        &DisorderLaw::gaussian(),
        CouplingParams::new(0.0, 0.4).unwrap(),
        &cfg,
    ) {
        Ok(e) => Verdict::at_most(e.values.iter().map(|v| v.abs()).fold(0.0, f64::max), 0.0, "f0..f4"),
        Err(e) => Verdict::failed(e.to_string()),
    }
}

/// `|log Z̃(η/2) − log Z̃(η)| ≤ Σ 2λ(|β_I| + h|I|)` over the gaps removed by
/// coarsening.
fn cutoff_consistency(ctx: &Ctx) -> Verdict {
    let p = CouplingParams::new(1.0, 0.4).unwrap();
    let eta = 1e-3;
    let mut rng = ctx.rng(11);
    let mut worst = f64::NEG_INFINITY;
    for s in 0..300u64 {
        let fine = sample_regenerative_excursions(5.0, 0.5, eta / 2.0, &mut rng).unwrap();
        let coarse = fine.coarsen(eta);
        let a = continuum_log_partition_keyed(&fine, p, SignMode::AnalyticAverage, s).log_z;
        let b = continuum_log_partition_keyed(&coarse, p, SignMode::AnalyticAverage, s).log_z;
        let removed: f64 = fine
            .gaps
            .iter()
            .filter(|&&(l, r)| r - l < eta && r <= fine.t)
            .map(|&(l, r)| 2.0 * p.lambda * (gap_increment(s, l, r - l).abs() + p.h * (r - l)))
            .sum();
        worst = worst.max((a - b).abs() - removed);
    }
    Verdict::at_most(worst, 1e-12, "max(|dlogZ| - removed energy)")
}

fn skip_ok(sk: &Skeleton) -> bool {
    sk.check_invariants().is_ok() && sk.sigma.windows(2).all(|w| w[1] - w[0] >= sk.skip)
}

fn skip_rule(ctx: &Ctx) -> Verdict {
    let mut rng = ctx.rng(12);
    let k = law(0.6, 400);
    let mut bad = 0usize;
    for _ in 0..200 {
        let a = 0.5;
        let block = rng.random_range(1..5);
        let blocks = rng.random_range(1..40);
        let skip = rng.random_range(1..6);
        let eps = block as f64 * a * a;
        let path = sample_path(&k, blocks * block, &mut rng).unwrap();
        match coarse_grain_discrete(&path, a, eps, skip as f64 * eps, blocks as f64 * eps) {
            Ok(sk) if skip_ok(&sk) => {}
            _ => bad += 1,
        }
    }
    for _ in 0..200 {
        let e = sample_regenerative_excursions(8.0, 0.5, 1e-4, &mut rng).unwrap();
        match coarse_grain_continuum(&e, 0.125, 0.5, 8.0) {
            Ok(sk) if skip_ok(&sk) => {}
            _ => bad += 1,
        }
    }
    Verdict::at_most(bad as f64, 0.0, "400 skeletons")
}

fn comonotone(_: &Ctx) -> Verdict {
    let fs = DisorderLaw::finite_support(vec![-2.0, 0.5], vec![0.2, 0.8]).unwrap();
    let mut bad = 0usize;
    for d in [DisorderLaw::gaussian(), DisorderLaw::binary(), fs] {
        for &n in &[1usize, 7, 64] {
            let pairs: Vec<_> = (1..1000)
                .map(|i| skorohod_pair(&d, n, i as f64 / 1000.0, 20_000).unwrap())
                .collect();
            bad += pairs.windows(2).filter(|w| w[0].x > w[1].x || w[0].y > w[1].y).count();
        }
    }
    Verdict::at_most(bad as f64, 0.0, "order violations on a u grid")
}

fn rn_determinism(_: &Ctx) -> Verdict {
    let k = law(0.5, 6000);
    let u = renewal_mass_function(&k, 1000).unwrap();
    let (ys, zs) = ([0.0, 0.1, 0.3], [1.0, 2.0, 5.0]);
    let a = RnReport::build(&k, &u, &ys, &zs, 0.2, 1000);
    let b = RnReport::build(&k, &u, &ys, &zs, 0.2, 1000);
    let ka = skeleton_log_rn_bound(&k, &u, &[0.05, 0.1, 0.2], &zs, 0.2, 1000);
    let kb = skeleton_log_rn_bound(&k, &u, &[0.05, 0.1, 0.2], &zs, 0.2, 1000);
    let same = a.is_ok() && a == b && ka.is_ok() && ka == kb;
    Verdict::at_most(f64::from(u8::from(!same)), 0.0, "repeat evaluation")
}

fn step1_bound(ctx: &Ctx) -> Verdict {
    let mut rng = ctx.rng(15);
    let k = law(0.5, 400);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..200u64 {
        let a = 0.5;
        let block = rng.random_range(1..5);
        let blocks = rng.random_range(1..40);
        let skip = rng.random_range(1..6);
        let eps = block as f64 * a * a;
        let n = blocks * block;
        let path = sample_path(&k, n, &mut rng).unwrap();
        let sk = coarse_grain_discrete(&path, a, eps, skip as f64 * eps, blocks as f64 * eps).unwrap();
        let mm = step1_mismatch(&path, &sk).unwrap();
        worst = worst.max(mm.mismatched_sites as f64 - mm.bound as f64);
        let w = DisorderSample::generate(&DisorderLaw::gaussian(), n, derive_seed(ctx.seed, &[15, i]));
        let p = CouplingParams::new(1.0, 0.3).unwrap();
        let (h0, h1) = coarse_grained_hamiltonian_discrete(&path, &w, &sk, a, p).unwrap();
        let top = w.omegas().iter().map(|x| (x + a * p.h).abs()).fold(0.0, f64::max);
        worst = worst.max((h0 - h1).abs() - top * mm.bound as f64 - 1e-9);
    }
    Verdict::at_most(worst, 0.0, "max excess over the site and energy bounds")
}

fn rn_ratio_grid(_: &Ctx) -> Verdict {
    let k = law(0.5, 60_000);
    let u = renewal_mass_function(&k, 10_000).unwrap();
    match RnReport::build(&k, &u, &[0.0, 0.1, 0.3], &[1.0, 2.0, 5.0], 0.2, 10_000) {
        Ok(r) => {
            let worst = r.entries.iter().map(|e| (e.ratio - 1.0).abs()).fold(0.0, f64::max);
            Verdict::at_most(worst, 0.1, "max |J/I - 1|, n = 1e4")
        }
        Err(e) => Verdict::failed(e.to_string()),
    }
}

fn arcsine(ctx: &Ctx) -> Verdict {
    let mut worst: f64 = 0.0;
    for (i, &alpha) in [0.3, 0.5, 0.8].iter().enumerate() {
        let mut rng = rng_for(ctx.seed, &[17, i as u64]);
        let eta = 10f64.powf(-3.0 / alpha).min(1e-4);
        let g: Vec<f64> = (0..100_000)
            .map(|_| sample_last_zero(1.0, alpha, eta, &mut rng).unwrap())
            .collect();
        worst = worst.max(ks_one_sample(&g, |y| beta_reg(alpha, 1.0 - alpha, y.clamp(0.0, 1.0))));
    }
    Verdict::at_most(worst, 0.01, "KS of g_1 against Beta(a, 1-a)")
}

fn d_law(ctx: &Ctx) -> Verdict {
    let alpha = 0.5;
    let mut rng = ctx.rng(18);
    let d: Vec<f64> = (0..100_000)
        .map(|_| {
            let e = sample_regenerative_excursions(1.0, alpha, 1e-4, &mut rng).unwrap();
            e.first_point_after(1.0).unwrap()
        })
        .collect();
    let s = (PI * alpha).sin() / PI;
    let worst = [1.1, 2.0, 5.0]
        .iter()
        .map(|&y| {
            let exact = s * tanh_sinh(|b, from, _| from.powf(-alpha) / b, 1.0, y, 1e-12).value;
            let emp = d.iter().filter(|&&x| x <= y).count() as f64 / d.len() as f64;
            (emp - exact).abs()
        })
        .fold(0.0, f64::max);
    Verdict::at_most(worst, 0.01, "P(d_1 <= y), y = 1.1, 2, 5")
}

fn regenerative(ctx: &Ctx) -> Verdict {
    let (alpha, eta) = (0.6, 1e-3);
    let mut rng = ctx.rng(19);
    let (mut first, mut after) = (Vec::new(), Vec::new());
    while after.len() < 20_000 {
        let e = sample_regenerative_excursions(3.0, alpha, eta, &mut rng).unwrap();
        if first.len() < 20_000 {
            let (l, r) = e.gaps[0];
            first.push((r - l).min(1.0));
        }
        let d1 = e.first_point_after(1.0).unwrap();
        if d1 > 1.5 {
            continue;
        }
        if let Some(&(l, r)) = e.gaps.iter().find(|g| g.0 >= d1) {
            if r <= e.t || l < 2.5 {
                after.push((r - l).min(1.0));
            }
        }
    }
    Verdict::at_most(
        ks_two_sample(&first, &after),
        0.02,
        "first-gap width after d_1 vs from 0",
    )
}

fn campbell(ctx: &Ctx) -> Verdict {
    let mut rng = ctx.rng(20);
    match campbell_check(0.1, 0.25, 1.0, 0.5, 10_000, &mut rng) {
        Ok(r) => Verdict::at_most(
            (r.mc_mean - r.analytic).abs() / r.mc_stderr,
            3.0,
            "|MC - analytic| / stderr",
        ),
        Err(e) => Verdict::failed(e.to_string()),
    }
}

/// Mean `log Z̃_t(aλ, ah)` against mean `log Z̃_{a²t}(λ, h)` on the same number
/// of grid cells, independent draws.
pub fn scaling_statistic(seed: u64, draws: usize, cells: usize) -> (f64, f64) {
    let (lambda, h, t, a) = (1.0, 0.4, 40.0, 0.5);
    let p = CouplingParams::new(lambda, h).unwrap();
    let big =
        estimate_continuum_free_energy(0.5, p.scaled(a), t, cells as f64 / t, draws, derive_seed(seed, &[1])).unwrap();
    let small = estimate_continuum_free_energy(
        0.5,
        p,
        a * a * t,
        cells as f64 / (a * a * t),
        draws,
        derive_seed(seed, &[2]),
    )
    .unwrap();
    let (m1, m2) = (big.value * t, small.value * a * a * t);
    let s = ((big.stderr * t).powi(2) + (small.stderr * a * a * t).powi(2)).sqrt();
    (m1 - m2, s)
}

fn scaling(ctx: &Ctx) -> Verdict {
    let (diff, s) = scaling_statistic(derive_seed(ctx.seed, &[21]), 500, 400);
    Verdict::at_most(diff.abs() / s, 3.0, format!("difference {diff:.4e}, stderr {s:.4e}"))
}

fn marginal(ctx: &Ctx) -> Verdict {
    let n = 16;
    let law = BlockSumLaw::new(&DisorderLaw::binary(), n, 0).unwrap();
    let mut rng = Rng::seed_from_u64(derive_seed(ctx.seed, &[22]));
    let draws = 100_000;
    let mut counts = vec![0usize; n + 1];
    for _ in 0..draws {
        let u: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
        let x = law.pair(u).unwrap().x;
        counts[((x * (n as f64).sqrt() + n as f64) / 2.0).round() as usize] += 1;
    }
    let mut row = vec![1.0f64];
    for _ in 0..n {
        let mut next = vec![1.0; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    let total: f64 = row.iter().sum();
    let tv = counts
        .iter()
        .zip(&row)
        .map(|(&c, &b)| (c as f64 / draws as f64 - b / total).abs())
        .sum::<f64>()
        / 2.0;
    Verdict::at_most(tv, 0.01, "TV to Binomial(16, 1/2)")
}

/// Mean and standard error of the per-replica values.
pub fn moments(xs: &[f64]) -> (f64, f64) {
    let m = Moments::from_slice(xs);
    (m.mean, m.stderr())
}

//! Five finite-`t` free energies at one `(a, ε, δ, t)`:
//!
//! * `f⁰`: discrete model at `(aλ, ah)` on `t/a²` steps, rescaled by `1/a²`;
//! * `f¹`: sign-averaged skeleton weights with the block sums of `ω`;
//! * `f²`: the same with coupled Gaussian block sums;
//! * `f³`: the skeleton of the regenerative set, positions resolved to
//!   `ε/R` inside each block, with the same Gaussian block sums;
//! * `f⁴`: the continuum model on a grid of mesh `η = ε/C`, with the
//!   Brownian path bridged between the block values.
//!
//! Skeleton partition functions are exact sums over skeletons, so the only
//! randomness is the disorder.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use super::skeleton::integer_ratio;
use super::skorohod::BlockSumLaw;
use crate::continuum::GridRegenerativeLaw;
use crate::discrete::{log_partition_exact, DisorderSample};
use crate::model::{renewal_mass_function, CouplingParams, DisorderLaw, RenewalMassFunction, TailedRenewalLaw};
use crate::numerics::{log_half_one_plus_exp, LogAccumulator};
use crate::rng::{derive_seed, hash_uniform, rng_for};
use crate::stats::Moments;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub a: f64,
    pub eps: f64,
    pub delta: f64,
    pub t: f64,
    /// Resolution `R` of continuum skeleton positions inside a block.
    pub subcells: usize,
    /// Grid cells per block for the continuum model, `ε/η`.
    pub cells_per_block: usize,
    pub replicas: usize,
    pub seed: u64,
    pub mc_cdf_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainReplica {
    pub f: [f64; 5],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainEstimate {
    pub values: [f64; 5],
    pub stderrs: [f64; 5],
    /// `f^{i+1} − f^i`.
    pub gaps: [f64; 4],
    /// Standard errors of the paired gaps.
    pub gap_stderrs: [f64; 4],
    pub fine_steps: usize,
    pub block_len: usize,
    pub blocks: usize,
    pub skip: usize,
    pub replicas: Vec<ChainReplica>,
}

#[derive(Debug, Clone, Copy)]
struct Geometry {
    b: usize,
    d: usize,
    j: usize,
}

/// `log ½(1 + exp(−2λ(P_j − P_i + h_b (j − i))))` for a coarse excursion
/// covering blocks `i+1..=j`.
struct BlockWeights {
    lambda: f64,
    prefix: Vec<f64>,
    h_block: f64,
}

impl BlockWeights {
    fn log_w(&self, i: usize, j: usize) -> f64 {
        if self.lambda == 0.0 {
            return 0.0;
        }
        log_half_one_plus_exp(-2.0 * self.lambda * (self.prefix[j] - self.prefix[i] + self.h_block * (j - i) as f64))
    }
}

/// Rescales `m` to max 1; returns the log of the factor removed.
fn normalize(m: &mut [f64]) -> f64 {
    let top = m.iter().cloned().fold(0.0, f64::max);
    if top > 0.0 {
        m.iter_mut().for_each(|x| *x /= top);
        top.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Log of the sign-averaged skeleton partition function of a renewal
/// process: the sum over skeletons of their probability times the product of
/// coarse-excursion weights.
fn discrete_skeleton_log_partition(
    k: &TailedRenewalLaw,
    u: &RenewalMassFunction,
    g: Geometry,
    w: &BlockWeights,
) -> f64 {
    let Geometry { b, d, j: nb } = g;
    let n = nb * b;
    // Block 0 is the origin alone.
    let first = |i: usize| if i == 0 { 0 } else { (i - 1) * b + 1 };
    // a[i][v − first(i)] = Σ_{x ∈ block i} F(x) U(v − x), v ≤ s0(i).
    let mut a_scale: Vec<f64> = Vec::with_capacity(nb);
    let mut a_mant: Vec<Vec<f64>> = Vec::with_capacity(nb);
    let mut total = LogAccumulator::new();

    let mut push_source = |i: usize, scale: f64, f: &[f64], a_scale: &mut Vec<f64>, a_mant: &mut Vec<Vec<f64>>| {
        let lo = first(i);
        let s0 = (i + d - 1) * b;
        if s0 >= n {
            // Never a source again; only the truncated ending remains.
            if scale > f64::NEG_INFINITY {
                total.add_scaled(scale + w.log_w(i, nb), f.iter().sum());
            }
            a_scale.push(f64::NEG_INFINITY);
            a_mant.push(Vec::new());
            return;
        }
        let mut av = vec![0.0; s0 + 1 - lo];
        if scale > f64::NEG_INFINITY {
            for (xl, &fx) in f.iter().enumerate() {
                if fx == 0.0 {
                    continue;
                }
                let x = lo + xl;
                for v in x..=s0 {
                    av[v - lo] += fx * u.u(v - x);
                }
            }
        }
        let sc = scale + normalize(&mut av);
        // Truncated last excursion: no renewal in (s0, N].
        if sc > f64::NEG_INFINITY {
            let surv: f64 = av.iter().enumerate().map(|(vl, &x)| x * k.tail(n - (lo + vl))).sum();
            total.add_scaled(sc + w.log_w(i, nb), surv);
        }
        a_scale.push(sc);
        a_mant.push(av);
    };

    push_source(0, 0.0, &[1.0], &mut a_scale, &mut a_mant);
    for _ in 1..d.min(nb + 1) {
        a_scale.push(f64::NEG_INFINITY);
        a_mant.push(Vec::new());
    }
    for j in d..=nb {
        let lo = first(j);
        let mut mant = vec![0.0; b];
        let sources: Vec<usize> = (0..=j - d).filter(|&i| a_scale[i] > f64::NEG_INFINITY).collect();
        let cs: Vec<f64> = sources.iter().map(|&i| a_scale[i] + w.log_w(i, j)).collect();
        let top = cs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut scale = f64::NEG_INFINITY;
        if top > f64::NEG_INFINITY {
            for (&i, &c) in sources.iter().zip(&cs) {
                let f = (c - top).exp();
                if f == 0.0 {
                    continue;
                }
                let vlo = first(i);
                let av = &a_mant[i];
                for (yl, m) in mant.iter_mut().enumerate() {
                    let y = lo + yl;
                    let q: f64 = av.iter().enumerate().map(|(vl, &x)| x * k.k(y - (vlo + vl))).sum();
                    *m += f * q;
                }
            }
            scale = top + normalize(&mut mant);
        }
        if j == nb {
            if scale > f64::NEG_INFINITY {
                total.add_scaled(scale, mant.iter().sum());
            }
            break;
        }
        push_source(j, scale, &mant, &mut a_scale, &mut a_mant);
    }
    total.value()
}

/// Same sum for the regenerative set of index `α`, with the position of each
/// skeleton point inside its block rounded to `R` subcells.
fn continuum_skeleton_log_partition(alpha: f64, r: usize, g: Geometry, w: &BlockWeights) -> f64 {
    let Geometry { d, j: nb, .. } = g;
    // cdf[row][m] = P(d_{s0} − s0 ≤ m ε/R) for a start at distance gap(row)·ε/R before s0.
    let span = nb * r + 1;
    let gaps: Vec<f64> = (0..r)
        .map(|q| (d * r) as f64 - q as f64 - 0.5)
        .chain(std::iter::once(((d - 1) * r) as f64))
        .collect();
    let cdf: Vec<Vec<f64>> = gaps
        .par_iter()
        .map(|&gp| {
            (0..=span)
                .map(|m| {
                    let m = m as f64;
                    if m == 0.0 {
                        0.0
                    } else if gp == 0.0 {
                        1.0
                    } else {
                        beta_reg(1.0 - alpha, alpha, m / (m + gp))
                    }
                })
                .collect()
        })
        .collect();

    let mut f_scale: Vec<f64> = vec![f64::NEG_INFINITY; nb + 1];
    let mut f_mant: Vec<Vec<f64>> = vec![Vec::new(); nb + 1];
    f_scale[0] = 0.0;
    f_mant[0] = vec![1.0];
    let rows = |i: usize| -> Vec<usize> {
        if i == 0 {
            vec![r]
        } else {
            (0..r).collect()
        }
    };
    let mut total = LogAccumulator::new();

    for j in 0..=nb {
        if j >= d {
            let lo_m = |i: usize| (j - 1 - (i + d - 1)) * r;
            let sources: Vec<usize> = (0..=j - d).filter(|&i| f_scale[i] > f64::NEG_INFINITY).collect();
            let cs: Vec<f64> = sources.iter().map(|&i| f_scale[i] + w.log_w(i, j)).collect();
            let top = cs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut mant = vec![0.0; r];
            if top > f64::NEG_INFINITY {
                for (&i, &c) in sources.iter().zip(&cs) {
                    let f = (c - top).exp();
                    if f == 0.0 {
                        continue;
                    }
                    let m0 = lo_m(i);
                    for (&row, &fx) in rows(i).iter().zip(&f_mant[i]) {
                        if fx == 0.0 {
                            continue;
                        }
                        let tab = &cdf[row];
                        for (q, m) in mant.iter_mut().enumerate() {
                            *m += f * fx * (tab[m0 + q + 1] - tab[m0 + q]);
                        }
                    }
                }
                f_scale[j] = top + normalize(&mut mant);
            }
            f_mant[j] = mant;
            if j == nb {
                if f_scale[j] > f64::NEG_INFINITY {
                    total.add_scaled(f_scale[j], f_mant[j].iter().sum());
                }
                break;
            }
        }
        if f_scale[j] > f64::NEG_INFINITY {
            // Truncated: no point of the set in (s0, t].
            let s0 = j + d - 1;
            let surv: f64 = rows(j)
                .iter()
                .zip(&f_mant[j])
                .map(|(&row, &fx)| {
                    if s0 >= nb {
                        fx
                    } else {
                        fx * (1.0 - cdf[row][(nb - s0) * r])
                    }
                })
                .sum();
            total.add_scaled(f_scale[j] + w.log_w(j, nb), surv);
        }
    }
    total.value()
}

fn check_config(k: &TailedRenewalLaw, cfg: &ChainConfig) -> Result<Geometry> {
    if !(cfg.a > 0.0 && cfg.a <= 1.0) {
        return Err(Error::param("a", format!("must lie in (0, 1], got {}", cfg.a)));
    }
    if cfg.replicas == 0 || cfg.subcells == 0 || cfg.cells_per_block == 0 {
        return Err(Error::param("replicas/subcells/cells_per_block", "must be positive"));
    }
    let b = integer_ratio("eps/a^2", cfg.eps / (cfg.a * cfg.a))?;
    let d = integer_ratio("delta/eps", cfg.delta / cfg.eps)?;
    let j = integer_ratio("t/eps", cfg.t / cfg.eps)?;
    if j * b > k.horizon() {
        return Err(Error::HorizonExceeded {
            requested: j * b,
            available: k.horizon(),
        });
    }
    if k.period() != 1 && b % k.period() != 0 {
        return Err(Error::Inconsistent(format!(
            "block length {b} must be a multiple of the period {}",
            k.period()
        )));
    }
    Ok(Geometry { b, d, j })
}

fn prefix(xs: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out = vec![0.0];
    let mut s = 0.0;
    for x in xs {
        s += x;
        out.push(s);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn replica(
    k: &TailedRenewalLaw,
    u: &RenewalMassFunction,
    grid: &GridRegenerativeLaw,
    law: &BlockSumLaw,
    d: &DisorderLaw,
    p: CouplingParams,
    cfg: &ChainConfig,
    g: Geometry,
    r: u64,
) -> Result<ChainReplica> {
    let n = g.j * g.b;
    let a = cfg.a;
    let w = DisorderSample::generate(d, n, derive_seed(cfg.seed, &[r]));
    let f0 = log_partition_exact(&w, k, p.scaled(a))?.log_z / cfg.t;

    let sqrt_b = (g.b as f64).sqrt();
    let block_sums: Vec<f64> = (1..=g.j).map(|i| w.prefix(i * g.b) - w.prefix((i - 1) * g.b)).collect();
    let coin_key = derive_seed(cfg.seed, &[r, 1]);
    let ys: Vec<f64> = block_sums
        .iter()
        .enumerate()
        .map(|(i, &s)| law.couple(s / sqrt_b, hash_uniform(coin_key, i as u64)))
        .collect();

    let w1 = BlockWeights {
        lambda: a * p.lambda,
        prefix: prefix(block_sums.iter().cloned()),
        h_block: a * p.h * g.b as f64,
    };
    let w2 = BlockWeights {
        lambda: a * p.lambda,
        prefix: prefix(ys.iter().map(|y| y * sqrt_b)),
        h_block: a * p.h * g.b as f64,
    };
    let sqrt_eps = cfg.eps.sqrt();
    let w3 = BlockWeights {
        lambda: p.lambda,
        prefix: prefix(ys.iter().map(|y| y * sqrt_eps)),
        h_block: p.h * cfg.eps,
    };
    let (f1, f2, f3) = if p.lambda == 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        (
            discrete_skeleton_log_partition(k, u, g, &w1) / cfg.t,
            discrete_skeleton_log_partition(k, u, g, &w2) / cfg.t,
            continuum_skeleton_log_partition(k.alpha(), cfg.subcells, g, &w3) / cfg.t,
        )
    };

    let c = cfg.cells_per_block;
    let eta = cfg.eps / c as f64;
    let mut rng = rng_for(cfg.seed, &[r, 2]);
    let mut beta = Vec::with_capacity(g.j * c + 1);
    beta.push(0.0);
    let mut walk = vec![0.0; c + 1];
    for blk in 0..g.j {
        let (b0, b1) = (w3.prefix[blk], w3.prefix[blk + 1]);
        for q in 1..=c {
            walk[q] = walk[q - 1] + eta.sqrt() * rng.sample::<f64, _>(StandardNormal);
        }
        for q in 1..=c {
            let s = q as f64 / c as f64;
            beta.push(b0 + walk[q] - s * walk[c] + s * (b1 - b0));
        }
    }
    let f4 = grid.log_partition(&beta, eta, p)? / cfg.t;
    Ok(ChainReplica {
        f: [f0, f1, f2, f3, f4],
    })
}

pub fn pipeline_chain(
    k: &TailedRenewalLaw,
    d: &DisorderLaw,
    p: CouplingParams,
    cfg: &ChainConfig,
) -> Result<ChainEstimate> {
    let g = check_config(k, cfg)?;
    let u = renewal_mass_function(k, g.j * g.b)?;
    let grid = GridRegenerativeLaw::new(k.alpha(), g.j * cfg.cells_per_block)?;
    let law = BlockSumLaw::new(d, g.b, cfg.mc_cdf_samples)?;
    let reps = (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|r| replica(k, &u, &grid, &law, d, p, cfg, g, r))
        .collect::<Result<Vec<_>>>()?;
    let mut values = [0.0; 5];
    let mut stderrs = [0.0; 5];
    for i in 0..5 {
        let m = Moments::from_slice(&reps.iter().map(|r| r.f[i]).collect::<Vec<_>>());
        values[i] = m.mean;
        stderrs[i] = m.stderr();
    }
    let mut gaps = [0.0; 4];
    let mut gap_stderrs = [0.0; 4];
    for i in 0..4 {
        let m = Moments::from_slice(&reps.iter().map(|r| r.f[i + 1] - r.f[i]).collect::<Vec<_>>());
        gaps[i] = m.mean;
        gap_stderrs[i] = m.stderr();
    }
    Ok(ChainEstimate {
        values,
        stderrs,
        gaps,
        gap_stderrs,
        fine_steps: g.j * g.b,
        block_len: g.b,
        blocks: g.j,
        skip: g.d,
        replicas: reps,
    })
}

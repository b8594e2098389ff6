use rand::Rng;
use rand_distr::StandardNormal;

use super::Skeleton;
use crate::discrete::{DisorderSample, PathSample};
use crate::model::CouplingParams;
use crate::numerics::log_half_one_plus_exp;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkeletonHamiltonian {
    /// `(1/a) Σ s_k (β_{σ_k} − β_{σ_{k−1}} + h(σ_k − σ_{k−1}))`, times in units of `ε`-blocks scaled by `ε`.
    pub hamiltonian: f64,
    /// `Σ log ½(1 + e^{−2λ(Δβ + hΔσ)})`.
    pub log_weight: f64,
}

/// Draws the Brownian increments across coarse excursions and evaluates the
/// skeleton Hamiltonian together with its sign-averaged log weight.
pub fn skeleton_hamiltonian<R: Rng + ?Sized>(
    sk: &Skeleton,
    a: f64,
    p: CouplingParams,
    rng: &mut R,
) -> SkeletonHamiltonian {
    let cap = sk.capped();
    let increments: Vec<f64> = cap
        .windows(2)
        .map(|w| ((w[1] - w[0]) as f64 * sk.block_eps).sqrt() * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut h = 0.0;
    for (k, (w, db)) in cap.windows(2).zip(&increments).enumerate() {
        if sk.signs[k] == 1 {
            h += db + p.h * (w[1] - w[0]) as f64 * sk.block_eps;
        }
    }
    SkeletonHamiltonian {
        hamiltonian: h / a,
        log_weight: skeleton_log_weight(sk, &increments, p),
    }
}

/// Sign-averaged log weight for given Brownian increments across the coarse excursions.
pub fn skeleton_log_weight(sk: &Skeleton, increments: &[f64], p: CouplingParams) -> f64 {
    if p.lambda == 0.0 {
        return 0.0;
    }
    sk.capped()
        .windows(2)
        .zip(increments)
        .map(|(w, db)| log_half_one_plus_exp(-2.0 * p.lambda * (db + p.h * (w[1] - w[0]) as f64 * sk.block_eps)))
        .sum()
}

fn block_len(sk: &Skeleton) -> Result<(f64, usize)> {
    let a = sk
        .scale_a
        .ok_or_else(|| Error::Inconsistent("skeleton was not built from a discrete path".into()))?;
    let b = (sk.block_eps / (a * a)).round() as usize;
    Ok((a, b))
}

/// `(H⁰, H¹)`: the fine Hamiltonian `Σ (ω_i + ah)Δ_i` and its coarse-grained
/// version `Σ_k s_k (Z_k(ω) + ah|Ī_k|)` over `(0, t/a²]`.
pub fn coarse_grained_hamiltonian_discrete(
    path: &PathSample,
    w: &DisorderSample,
    sk: &Skeleton,
    a: f64,
    p: CouplingParams,
) -> Result<(f64, f64)> {
    let (sa, b) = block_len(sk)?;
    if (sa - a).abs() > 1e-12 * a {
        return Err(Error::Inconsistent(format!(
            "skeleton built with a = {sa}, asked for {a}"
        )));
    }
    let n = sk.horizon_blocks * b;
    if path.n < n || w.n() < n {
        return Err(Error::Inconsistent(format!(
            "need path and disorder up to {n}, have {} and {}",
            path.n,
            w.n()
        )));
    }
    let ah = a * p.h;
    let delta = path.delta_vec();
    let h0: f64 = (1..=n).map(|i| (w.omega(i) + ah) * delta[i - 1] as f64).sum();
    let mut h1 = 0.0;
    for (k, win) in sk.capped().windows(2).enumerate() {
        if sk.signs[k] == 1 {
            let (lo, hi) = (win[0] * b, win[1] * b);
            h1 += w.prefix(hi) - w.prefix(lo) + ah * (hi - lo) as f64;
        }
    }
    Ok((h0, h1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step1Mismatch {
    /// `Σ_k Σ_{i∈Ī_k} |Δ_i − s_k|`.
    pub mismatched_sites: usize,
    /// Mass of completed excursions shorter than `δ/a²`.
    pub short_mass: usize,
    /// `short_mass + (ε/a²)·m`.
    pub bound: usize,
}

/// Counts the sites where the coarse sign disagrees with the fine one, and
/// the bound on that count by short excursions plus one block per coarse
/// excursion.
pub fn step1_mismatch(path: &PathSample, sk: &Skeleton) -> Result<Step1Mismatch> {
    let (a, b) = block_len(sk)?;
    let n = sk.horizon_blocks * b;
    if path.n < n {
        return Err(Error::Inconsistent(format!("path covers {} steps, need {n}", path.n)));
    }
    let long = (sk.skip as f64 * sk.block_eps / (a * a)).round() as usize;
    let delta = path.delta_vec();
    let mut mismatched = 0;
    for (k, win) in sk.capped().windows(2).enumerate() {
        mismatched += delta[win[0] * b..win[1] * b]
            .iter()
            .filter(|&&d| d != sk.signs[k])
            .count();
    }
    let short_mass: usize = path
        .tau
        .windows(2)
        .filter(|w| w[1] <= n)
        .map(|w| w[1] - w[0])
        .filter(|&g| g < long)
        .sum();
    Ok(Step1Mismatch {
        mismatched_sites: mismatched,
        short_mass,
        bound: short_mass + b * sk.m,
    })
}

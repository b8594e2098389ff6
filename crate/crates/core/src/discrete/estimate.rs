use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{log_partition_exact, DisorderSample};
use crate::model::{hc_bounds, CouplingParams, DisorderLaw, TailedRenewalLaw};
use crate::rng::derive_seed;
use crate::stats::Moments;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMode {
    ReplicaAverage,
    SingleTrajectory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Horizon actually used, snapped to the period.
    pub n: usize,
    pub replicas: usize,
    pub mode: EstimateMode,
    /// Per-replica `(1/N) log Z`.
    pub samples: Vec<f64>,
}

fn snap(k: &TailedRenewalLaw, n: usize) -> Result<usize> {
    let t = k.period();
    let m = n - n % t;
    if m == 0 {
        return Err(Error::param("n", format!("horizon {n} is shorter than the period {t}")));
    }
    if m > k.horizon() {
        return Err(Error::HorizonExceeded {
            requested: m,
            available: k.horizon(),
        });
    }
    Ok(m)
}

/// Replica index `r` uses the disorder stream `derive_seed(seed, [r])`.
pub fn estimate_free_energy(
    k: &TailedRenewalLaw,
    d: &DisorderLaw,
    p: CouplingParams,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<FreeEnergyEstimate> {
    if replicas == 0 {
        return Err(Error::param("replicas", "must be at least 1"));
    }
    let n = snap(k, n)?;
    let samples = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let w = DisorderSample::generate(d, n, derive_seed(seed, &[r as u64]));
            log_partition_exact(&w, k, p).map(|q| q.log_z / n as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let m = Moments::from_slice(&samples);
    Ok(FreeEnergyEstimate {
        value: m.mean,
        stderr: m.stderr(),
        n,
        replicas,
        mode: EstimateMode::ReplicaAverage,
        samples,
    })
}

/// `(1/N) log Z_N` for a single long disorder sequence.
pub fn estimate_free_energy_single(
    k: &TailedRenewalLaw,
    d: &DisorderLaw,
    p: CouplingParams,
    n: usize,
    seed: u64,
) -> Result<FreeEnergyEstimate> {
    let n = snap(k, n)?;
    let w = DisorderSample::generate(d, n, derive_seed(seed, &[0]));
    let v = log_partition_exact(&w, k, p)?.log_z / n as f64;
    Ok(FreeEnergyEstimate {
        value: v,
        stderr: 0.0,
        n,
        replicas: 1,
        mode: EstimateMode::SingleTrajectory,
        samples: vec![v],
    })
}

/// Localization threshold: `f̂ > max(k_sigma·stderr, floor)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub k_sigma: f64,
    pub floor: f64,
}

impl Default for Detection {
    fn default() -> Self {
        Self {
            k_sigma: 3.0,
            floor: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub h: f64,
    pub value: f64,
    pub stderr: f64,
    pub localized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HcEstimate {
    pub lambda: f64,
    pub h_lo: f64,
    pub h_hi: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub probes: Vec<Probe>,
}

/// Probes share `seed`, so every `h` sees the same disorder replicas.
#[allow(clippy::too_many_arguments)]
pub fn probe_localization(
    k: &TailedRenewalLaw,
    d: &DisorderLaw,
    lambda: f64,
    h: f64,
    n: usize,
    replicas: usize,
    seed: u64,
    detection: Detection,
) -> Result<Probe> {
    let est = estimate_free_energy(k, d, CouplingParams::new(lambda, h)?, n, replicas, seed)?;
    Ok(Probe {
        h,
        value: est.value,
        stderr: est.stderr,
        localized: est.value > (detection.k_sigma * est.stderr).max(detection.floor),
    })
}

/// Bisection for `h_c(λ)` starting from the analytic bounds widened by 20%.
#[allow(clippy::too_many_arguments)]
pub fn estimate_hc(
    k: &TailedRenewalLaw,
    d: &DisorderLaw,
    lambda: f64,
    n: usize,
    replicas: usize,
    seed: u64,
    detection: Detection,
    resolution: f64,
) -> Result<HcEstimate> {
    if !(resolution > 0.0) {
        return Err(Error::param("resolution", "must be positive"));
    }
    let (lower, upper) = hc_bounds(lambda, k.alpha(), d)?;
    let mut lo = 0.8 * lower;
    let mut hi = 1.2 * upper;
    let mut probes = Vec::new();
    let p_lo = probe_localization(k, d, lambda, lo, n, replicas, seed, detection)?;
    let p_hi = probe_localization(k, d, lambda, hi, n, replicas, seed, detection)?;
    let valid = p_lo.localized && !p_hi.localized;
    if !valid {
        return Err(Error::BracketInvalid {
            h_lo: lo,
            f_lo: p_lo.value,
            loc_lo: p_lo.localized,
            h_hi: hi,
            f_hi: p_hi.value,
            loc_hi: p_hi.localized,
        });
    }
    probes.push(p_lo);
    probes.push(p_hi);
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        let pr = probe_localization(k, d, lambda, mid, n, replicas, seed, detection)?;
        if pr.localized {
            lo = mid;
        } else {
            hi = mid;
        }
        probes.push(pr);
    }
    Ok(HcEstimate {
        lambda,
        h_lo: lo,
        h_hi: hi,
        lower_bound: lower,
        upper_bound: upper,
        probes,
    })
}

/// `(1/a²)·f_N(aλ, ah)` with `N = ⌈t/a²⌉` rounded up to the period.
pub fn weak_coupling_point(
    k: &TailedRenewalLaw,
    d: &DisorderLaw,
    p: CouplingParams,
    a: f64,
    t: f64,
    replicas: usize,
    seed: u64,
) -> Result<FreeEnergyEstimate> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::param("a", format!("must lie in (0, 1], got {a}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    let raw = (t / (a * a)).ceil() as usize;
    let period = k.period();
    let n = raw.div_ceil(period) * period;
    let est = estimate_free_energy(k, d, p.scaled(a), n, replicas, seed)?;
    let s = 1.0 / (a * a);
    Ok(FreeEnergyEstimate {
        value: est.value * s,
        stderr: est.stderr * s,
        samples: est.samples.iter().map(|v| v * s).collect(),
        ..est
    })
}

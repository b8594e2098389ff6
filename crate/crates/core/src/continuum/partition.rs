use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ExcursionDecomposition;
use crate::model::CouplingParams;
use crate::numerics::log_half_one_plus_exp;
use crate::rng::hash_normal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    AnalyticAverage,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuumQuenched {
    pub log_z: f64,
    pub t: f64,
    pub params: CouplingParams,
    pub sign_mode: SignMode,
    pub eta: f64,
    pub disorder_key: u64,
    /// Mass ignored by the cutoff.
    pub drift_comp: f64,
}

/// Brownian increment over a gap of length `len` whose left end is `l`.
///
/// The value depends on `(key, l)` only, so two decompositions sharing a gap
/// see the same disorder on it.
pub fn gap_increment(key: u64, l: f64, len: f64) -> f64 {
    len.sqrt() * hash_normal(key, l.to_bits())
}

/// Sign-averaged `log Z̃` with a fresh disorder key drawn from `rng`.
pub fn continuum_log_partition<R: Rng + ?Sized>(
    exc: &ExcursionDecomposition,
    p: CouplingParams,
    rng: &mut R,
) -> ContinuumQuenched {
    continuum_log_partition_keyed(exc, p, SignMode::AnalyticAverage, rng.random())
}

pub fn continuum_log_partition_keyed(
    exc: &ExcursionDecomposition,
    p: CouplingParams,
    mode: SignMode,
    disorder_key: u64,
) -> ContinuumQuenched {
    let mut log_z = 0.0;
    if p.lambda != 0.0 {
        for (&(l, r), &s) in exc.gaps.iter().zip(&exc.signs) {
            let len = r.min(exc.t) - l;
            let x = -2.0 * p.lambda * (gap_increment(disorder_key, l, len) + p.h * len);
            log_z += match mode {
                SignMode::AnalyticAverage => log_half_one_plus_exp(x),
                SignMode::Sampled => f64::from(s) * x,
            };
        }
    }
    ContinuumQuenched {
        log_z,
        t: exc.t,
        params: p,
        sign_mode: mode,
        eta: exc.eta,
        disorder_key,
        drift_comp: exc.drift_comp,
    }
}

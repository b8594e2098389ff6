use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::kernel::{log_partition, RenewalWeights};
use super::DisorderSample;
use crate::model::{CouplingParams, TailedRenewalLaw};
use crate::numerics::{log_half_one_plus_exp, LogAccumulator};
use crate::{Error, Result};

pub const BRUTE_FORCE_MAX_N: usize = 20;

/// Exact `log Z_{N,ω}` for one disorder realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuenchedRun {
    pub log_z: f64,
    pub n: usize,
    pub params: CouplingParams,
    pub alpha: f64,
    pub period: usize,
    pub seed: u64,
}

/// `log ½(1 + exp(−2λ((w_end − w_start) + h·len)))`.
#[inline]
pub fn log_excursion_weight(w_start: f64, w_end: f64, len: usize, p: CouplingParams) -> f64 {
    if p.lambda == 0.0 {
        return 0.0;
    }
    log_half_one_plus_exp(-2.0 * p.lambda * ((w_end - w_start) + p.h * len as f64))
}

/// Sign-averaged weight of one excursion.
pub fn excursion_weight(w_start: f64, w_end: f64, len: usize, p: CouplingParams) -> f64 {
    log_excursion_weight(w_start, w_end, len, p).exp()
}

/// `log(K̄(N)/2)`, evaluated as `log K̄(N) − log 2`.
pub fn restriction_bound(k: &TailedRenewalLaw, n: usize) -> f64 {
    k.tail(n).ln() - LN_2
}

fn check_horizon(k: &TailedRenewalLaw, n: usize) -> Result<()> {
    if n > k.horizon() {
        return Err(Error::HorizonExceeded {
            requested: n,
            available: k.horizon(),
        });
    }
    Ok(())
}

pub fn log_partition_exact(w: &DisorderSample, k: &TailedRenewalLaw, p: CouplingParams) -> Result<QuenchedRun> {
    let n = w.n();
    check_horizon(k, n)?;
    let log_z = if p.lambda == 0.0 || n == 0 {
        // Both sign weights are one and the renewal measure is normalized.
        0.0
    } else {
        let e: Vec<f64> = (0..=n)
            .map(|j| -2.0 * p.lambda * (w.prefix(j) + p.h * j as f64))
            .collect();
        let weights = RenewalWeights {
            k: &k.k_table()[..=n],
            kbar: &k.tail_table()[..=n],
            neutral: 0.0,
        };
        log_partition(&weights, &e)
    };
    Ok(QuenchedRun {
        log_z,
        n,
        params: p,
        alpha: k.alpha(),
        period: k.period(),
        seed: w.seed(),
    })
}

/// Sums the partition function over every renewal configuration in `(0, n]`.
pub fn brute_force_log_partition(w: &DisorderSample, k: &TailedRenewalLaw, p: CouplingParams, n: usize) -> Result<f64> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::param(
            "n",
            format!("brute force supports n <= {BRUTE_FORCE_MAX_N}, got {n}"),
        ));
    }
    if n > w.n() {
        return Err(Error::Inconsistent(format!("disorder has {} charges, need {n}", w.n())));
    }
    check_horizon(k, n)?;
    if p.lambda == 0.0 || n == 0 {
        return Ok(0.0);
    }
    let lw = |i: usize, j: usize| log_excursion_weight(w.prefix(i), w.prefix(j), j - i, p);
    let mut acc = LogAccumulator::new();
    'config: for mask in 0u32..(1u32 << n) {
        let mut last = 0usize;
        let mut log_weight = 0.0;
        for pos in 1..=n {
            if mask & (1 << (pos - 1)) != 0 {
                let kk = k.k(pos - last);
                if kk == 0.0 {
                    continue 'config;
                }
                log_weight += kk.ln() + lw(last, pos);
                last = pos;
            }
        }
        if last < n {
            log_weight += k.tail(n - last).ln() + lw(last, n);
        }
        acc.add(log_weight);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_renewal_law, DisorderLaw, SlowlyVarying};

    fn law(alpha: f64, period: usize) -> TailedRenewalLaw {
        build_renewal_law(alpha, SlowlyVarying::Constant { c: 1.0 }, 100, period).unwrap()
    }

    #[test]
    fn excursion_weight_examples() {
        let p = CouplingParams::new(1.0, 0.0).unwrap();
        assert!((excursion_weight(0.0, 1.0, 3, p) - 0.5 * (1.0 + (-2f64).exp())).abs() < 1e-15);
        assert_eq!(excursion_weight(0.3, 0.3, 5, p), 1.0);
        let p0 = CouplingParams::new(0.0, 2.0).unwrap();
        assert_eq!(excursion_weight(-4.0, 9.0, 5, p0), 1.0);
    }

    #[test]
    fn single_step_closed_form() {
        let w = DisorderSample::new(vec![0.7], 0);
        let p = CouplingParams::new(0.8, 0.3).unwrap();
        let expect = (0.5 * (1.0 + (-2.0 * 0.8 * (0.7 + 0.3f64)).exp())).ln();
        for alpha in [0.3, 0.8] {
            let got = log_partition_exact(&w, &law(alpha, 1), p).unwrap().log_z;
            assert!((got - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn two_steps_hand_enumeration() {
        let k = law(0.5, 1);
        let w = DisorderSample::new(vec![0.4, -1.1], 0);
        let p = CouplingParams::new(1.3, 0.2).unwrap();
        let phi = |i: usize, j: usize| excursion_weight(w.prefix(i), w.prefix(j), j - i, p);
        let (p1, p2) = (k.k(1), k.k(2));
        let z = p1 * p1 * phi(0, 1) * phi(1, 2)
            + p1 * k.tail(1) * phi(0, 1) * phi(1, 2)
            + p2 * phi(0, 2)
            + k.tail(2) * phi(0, 2);
        let bf = brute_force_log_partition(&w, &k, p, 2).unwrap();
        let dp = log_partition_exact(&w, &k, p).unwrap().log_z;
        assert!((bf - z.ln()).abs() < 1e-14 && (dp - z.ln()).abs() < 1e-14);
    }

    #[test]
    fn dp_matches_brute_force_with_period() {
        let k = law(0.4, 2);
        let d = DisorderLaw::binary();
        for seed in 0..5 {
            let w = DisorderSample::generate(&d, 13, seed);
            let p = CouplingParams::new(0.9, 0.35).unwrap();
            let a = log_partition_exact(&w, &k, p).unwrap().log_z;
            let b = brute_force_log_partition(&w, &k, p, 13).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} {b}");
        }
    }

    #[test]
    fn zero_coupling_and_errors() {
        let k = law(0.5, 1);
        let w = DisorderSample::generate(&DisorderLaw::gaussian(), 50, 1);
        let p = CouplingParams::new(0.0, 0.7).unwrap();
        assert_eq!(log_partition_exact(&w, &k, p).unwrap().log_z, 0.0);
        let long = DisorderSample::generate(&DisorderLaw::gaussian(), 101, 1);
        assert!(matches!(
            log_partition_exact(&long, &k, p),
            Err(Error::HorizonExceeded { .. })
        ));
        assert!(brute_force_log_partition(&w, &k, p, 21).is_err());
    }
}

use serde::{Deserialize, Serialize};

use crate::continuum::ExcursionDecomposition;
use crate::discrete::PathSample;
use crate::{Error, Result};

/// Coarse-grained returns `σ₁ < … < σ_m` (block indices) and signs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skeleton {
    pub m: usize,
    /// Visited blocks. When `truncated_last` is set, `sigma[m−1]` is a lower
    /// bound for a return beyond the horizon.
    pub sigma: Vec<usize>,
    pub signs: Vec<u8>,
    pub block_eps: f64,
    /// `δ/ε`.
    pub skip: usize,
    /// `t/ε`.
    pub horizon_blocks: usize,
    /// `a` for discrete skeletons.
    pub scale_a: Option<f64>,
    pub truncated_last: bool,
}

impl Skeleton {
    /// Block boundaries `σ₀ = 0, σ₁, …, σ_m`, capped at `t/ε`.
    pub fn capped(&self) -> Vec<usize> {
        std::iter::once(0)
            .chain(self.sigma.iter().map(|&s| s.min(self.horizon_blocks)))
            .collect()
    }

    pub fn check_invariants(&self) -> Result<()> {
        let j = self.horizon_blocks;
        if self.m == 0 || self.sigma.len() != self.m || self.signs.len() != self.m {
            return Err(Error::Invariant("skeleton lengths disagree".into()));
        }
        let mut prev = 0usize;
        for &s in &self.sigma {
            if s < prev + self.skip {
                return Err(Error::Invariant(format!(
                    "skip rule: {s} follows {prev} with skip {}",
                    self.skip
                )));
            }
            prev = s;
        }
        if self.sigma[self.m - 1] < j || (self.m >= 2 && self.sigma[self.m - 2] >= j) {
            return Err(Error::Invariant(
                "last return must be the first at or beyond t/ε".into(),
            ));
        }
        if self.truncated_last != (self.sigma[self.m - 1] > j) {
            return Err(Error::Invariant(
                "truncation flag disagrees with the last return".into(),
            ));
        }
        Ok(())
    }
}

/// Rounds `x` to a positive integer, rejecting values that are not one.
pub fn integer_ratio(what: &'static str, x: f64) -> Result<usize> {
    let r = x.round();
    if !(r >= 1.0) || (x - r).abs() > 1e-9 * r.max(1.0) {
        return Err(Error::NonIntegerRatio { what, value: x });
    }
    Ok(r as usize)
}

pub fn coarse_grain_discrete(path: &PathSample, a: f64, eps: f64, delta: f64, t: f64) -> Result<Skeleton> {
    let block = integer_ratio("eps/a^2", eps / (a * a))?;
    let skip = integer_ratio("delta/eps", delta / eps)?;
    let blocks = integer_ratio("t/eps", t / eps)?;
    let n = blocks * block;
    if path.n < n {
        return Err(Error::Inconsistent(format!(
            "path covers {} steps, need t/a^2 = {n}",
            path.n
        )));
    }
    let mut sigma = Vec::new();
    let mut signs = Vec::new();
    let mut truncated = false;
    let mut prev = 0usize;
    loop {
        let j0 = prev + skip;
        let next = if j0 > blocks {
            None
        } else {
            let start = (j0 - 1) * block;
            let idx = path.tau.partition_point(|&x| x <= start);
            path.tau.get(idx).filter(|&&e| e <= n).map(|&e| (idx, e))
        };
        match next {
            Some((idx, epoch)) => {
                let s = epoch.div_ceil(block);
                sigma.push(s);
                signs.push(path.xi[idx - 1]);
                prev = s;
                if s >= blocks {
                    break;
                }
            }
            None => {
                sigma.push(j0.max(blocks + 1));
                signs.push(path.delta(n));
                truncated = true;
                break;
            }
        }
    }
    let sk = Skeleton {
        m: sigma.len(),
        sigma,
        signs,
        block_eps: eps,
        skip,
        horizon_blocks: blocks,
        scale_a: Some(a),
        truncated_last: truncated,
    };
    debug_assert!(sk.check_invariants().is_ok());
    Ok(sk)
}

pub fn coarse_grain_continuum(exc: &ExcursionDecomposition, eps: f64, delta: f64, t: f64) -> Result<Skeleton> {
    let skip = integer_ratio("delta/eps", delta / eps)?;
    let blocks = integer_ratio("t/eps", t / eps)?;
    if exc.t < t * (1.0 - 1e-12) {
        return Err(Error::Inconsistent(format!(
            "decomposition observed up to {}, need {t}",
            exc.t
        )));
    }
    let mut sigma = Vec::new();
    let mut signs = Vec::new();
    let mut truncated = false;
    let mut prev = 0usize;
    loop {
        let j0 = prev + skip;
        if j0 > blocks {
            sigma.push(j0);
            signs.push(exc.sign_at(t, blocks as u64));
            truncated = true;
            break;
        }
        let s0 = (j0 - 1) as f64 * eps;
        let d = exc.first_point_after(s0).expect("block start lies before t");
        let s = if d <= s0 {
            j0
        } else {
            ((d / eps).ceil() as usize).max(j0)
        };
        if s > blocks {
            sigma.push(s);
            signs.push(exc.sign_at(t, blocks as u64));
            truncated = true;
            break;
        }
        sigma.push(s);
        signs.push(exc.sign_at(s0, j0 as u64));
        prev = s;
        if s == blocks {
            break;
        }
    }
    let sk = Skeleton {
        m: sigma.len(),
        sigma,
        signs,
        block_eps: eps,
        skip,
        horizon_blocks: blocks,
        scale_a: None,
        truncated_last: truncated,
    };
    debug_assert!(sk.check_invariants().is_ok());
    Ok(sk)
}

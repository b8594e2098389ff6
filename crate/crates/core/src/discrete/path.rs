use rand::Rng;

use crate::model::TailedRenewalLaw;
use crate::{Error, Result};

/// Renewal epochs in `[0, N]` and one fair sign per excursion meeting `(0, N]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSample {
    pub n: usize,
    pub tau: Vec<usize>,
    pub xi: Vec<u8>,
}

impl PathSample {
    /// Builds a path from explicit epochs; `tau` must start at 0 and
    /// `xi` must hold one sign per excursion meeting `(0, n]`.
    pub fn new(n: usize, tau: Vec<usize>, xi: Vec<u8>) -> Result<Self> {
        if tau.first() != Some(&0) || tau.windows(2).any(|w| w[1] <= w[0]) || *tau.last().unwrap() > n {
            return Err(Error::Inconsistent(
                "tau must start at 0, increase strictly and stay within n".into(),
            ));
        }
        let expected = tau.len() - 1 + usize::from(*tau.last().unwrap() < n);
        if xi.len() != expected || xi.iter().any(|&s| s > 1) {
            return Err(Error::Inconsistent(format!(
                "need {expected} signs in {{0,1}}, got {}",
                xi.len()
            )));
        }
        Ok(Self { n, tau, xi })
    }

    /// `Δ_i`, the sign of the excursion containing `i ∈ (0, N]`.
    pub fn delta(&self, i: usize) -> u8 {
        let e = self.tau.partition_point(|&t| t < i);
        self.xi[e - 1]
    }

    pub fn delta_vec(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.n);
        for (e, &s) in self.xi.iter().enumerate() {
            let end = self.tau.get(e + 1).copied().unwrap_or(self.n);
            out.extend(std::iter::repeat_n(s, end - self.tau[e]));
        }
        out
    }

    /// Lengths of the completed excursions inside `(0, N]`.
    pub fn gaps(&self) -> impl Iterator<Item = usize> + '_ {
        self.tau.windows(2).map(|w| w[1] - w[0])
    }
}

pub fn sample_path<R: Rng + ?Sized>(k: &TailedRenewalLaw, n: usize, rng: &mut R) -> Result<PathSample> {
    if n > k.horizon() {
        return Err(Error::HorizonExceeded {
            requested: n,
            available: k.horizon(),
        });
    }
    let mut tau = vec![0usize];
    let mut xi = Vec::new();
    let mut pos = 0usize;
    while pos < n {
        let v: f64 = rng.random();
        let sign = u8::from(rng.random::<bool>());
        xi.push(sign);
        match k.gap_from_uniform(v) {
            Some(g) if pos + g <= n => {
                pos += g;
                tau.push(pos);
            }
            _ => break,
        }
    }
    Ok(PathSample { n, tau, xi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_renewal_law, SlowlyVarying};
    use crate::rng::rng_for;

    #[test]
    fn structure_and_deltas() {
        let k = build_renewal_law(0.5, SlowlyVarying::Constant { c: 1.0 }, 1000, 1).unwrap();
        let mut rng = rng_for(5, &[]);
        for _ in 0..200 {
            let p = sample_path(&k, 300, &mut rng).unwrap();
            let p2 = PathSample::new(p.n, p.tau.clone(), p.xi.clone()).unwrap();
            assert_eq!(p, p2);
            let d = p.delta_vec();
            assert_eq!(d.len(), 300);
            for i in [1usize, 17, 150, 300] {
                assert_eq!(d[i - 1], p.delta(i));
            }
        }
    }

    #[test]
    fn fair_signs() {
        let k = build_renewal_law(0.5, SlowlyVarying::Constant { c: 1.0 }, 1000, 1).unwrap();
        let mut rng = rng_for(6, &[]);
        let reps = 4000;
        let mut tot = 0.0;
        for _ in 0..reps {
            let p = sample_path(&k, 100, &mut rng).unwrap();
            tot += p.delta_vec().iter().map(|&s| s as f64).sum::<f64>() / 100.0;
        }
        let mean = tot / reps as f64;
        assert!((mean - 0.5).abs() < 0.03, "{mean}");
    }
}

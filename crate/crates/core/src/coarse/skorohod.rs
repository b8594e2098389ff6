use serde::{Deserialize, Serialize};

use crate::model::{DisorderKind, DisorderLaw};
use crate::numerics::{normal_cdf, normal_quantile};
use crate::rng::rng_for;
use crate::{Error, Result};

pub const DEFAULT_MC_CDF_SAMPLES: usize = 1_000_000;
const EMPIRICAL_SEED: u64 = 0x05ee_dcdf;

/// Block sum `x = F_n⁻¹(u)` and Gaussian `y = Φ⁻¹(u)` driven by the same uniform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoupledBlockPair {
    pub u: f64,
    pub x: f64,
    pub y: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Gaussian,
    /// `P(#{+1} ≤ k)` for `k = 0..=n`.
    Binary(Vec<f64>),
    Empirical(Vec<f64>),
}

/// Law of `(Σ_{i≤n} ω_i)/√n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSumLaw {
    n: usize,
    repr: Repr,
}

impl BlockSumLaw {
    pub fn new(d: &DisorderLaw, n: usize, mc_cdf_samples: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "block size must be positive"));
        }
        let repr = match d.kind() {
            DisorderKind::Gaussian => Repr::Gaussian,
            DisorderKind::Binary => {
                let mut cdf = Vec::with_capacity(n + 1);
                let mut ln_p = -(n as f64) * std::f64::consts::LN_2;
                let mut acc = 0.0;
                for k in 0..=n {
                    if k > 0 {
                        ln_p += ((n - k + 1) as f64 / k as f64).ln();
                    }
                    acc += ln_p.exp();
                    cdf.push(acc.min(1.0));
                }
                cdf[n] = 1.0;
                Repr::Binary(cdf)
            }
            DisorderKind::FiniteSupport { .. } => {
                if mc_cdf_samples < 2 {
                    return Err(Error::param("mc_cdf_samples", "need at least two samples"));
                }
                let mut rng = rng_for(EMPIRICAL_SEED, &[n as u64]);
                let scale = (n as f64).sqrt();
                let mut s: Vec<f64> = (0..mc_cdf_samples)
                    .map(|_| (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / scale)
                    .collect();
                s.sort_by(f64::total_cmp);
                Repr::Empirical(s)
            }
        };
        Ok(Self { n, repr })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn binary_value(&self, k: usize) -> f64 {
        (2.0 * k as f64 - self.n as f64) / (self.n as f64).sqrt()
    }

    /// `F_n⁻¹(u) = inf{x: F_n(x) > u}`; the empirical law uses the
    /// piecewise-linear inverse through the sorted sample.
    pub fn quantile(&self, u: f64) -> f64 {
        match &self.repr {
            Repr::Gaussian => normal_quantile(u),
            Repr::Binary(cdf) => {
                let k = cdf.partition_point(|&c| c <= u).min(self.n);
                self.binary_value(k)
            }
            Repr::Empirical(s) => {
                let pos = (u * s.len() as f64 - 0.5).clamp(0.0, (s.len() - 1) as f64);
                let i = (pos.floor() as usize).min(s.len() - 2);
                let f = pos - i as f64;
                s[i] + f * (s[i + 1] - s[i])
            }
        }
    }

    /// `(F_n(x−), F_n(x))`.
    pub fn cdf_bounds(&self, x: f64) -> (f64, f64) {
        match &self.repr {
            Repr::Gaussian => {
                let c = normal_cdf(x);
                (c, c)
            }
            Repr::Binary(cdf) => {
                let k = (x * (self.n as f64).sqrt() + self.n as f64) / 2.0;
                let below = |k: f64| {
                    if k < 0.0 {
                        0.0
                    } else {
                        cdf[(k.floor() as usize).min(self.n)]
                    }
                };
                let kr = k.round();
                if (k - kr).abs() < 1e-9 {
                    (below(kr - 1.0), below(kr))
                } else {
                    (below(k), below(k))
                }
            }
            Repr::Empirical(s) => {
                let m = s.len() as f64;
                let lo = s.partition_point(|&v| v < x) as f64 / m;
                let hi = s.partition_point(|&v| v <= x) as f64 / m;
                (lo, hi)
            }
        }
    }

    /// Randomized probability integral transform: uniform on `(0,1)` when
    /// `x` follows the law and `v` is an independent uniform.
    pub fn pit(&self, x: f64, v: f64) -> f64 {
        let (lo, hi) = self.cdf_bounds(x);
        let u = lo + v * (hi - lo);
        u.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
    }

    /// Gaussian partner `Φ⁻¹(PIT(x, v))` of an observed normalized block sum.
    pub fn couple(&self, x: f64, v: f64) -> f64 {
        match self.repr {
            Repr::Gaussian => x,
            _ => normal_quantile(self.pit(x, v)),
        }
    }

    pub fn pair(&self, u: f64) -> Result<CoupledBlockPair> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::param("u", format!("must lie in (0, 1), got {u}")));
        }
        Ok(CoupledBlockPair {
            u,
            x: self.quantile(u),
            y: normal_quantile(u),
            n: self.n,
        })
    }
}

pub fn skorohod_pair(d: &DisorderLaw, n: usize, u: f64, mc_cdf_samples: usize) -> Result<CoupledBlockPair> {
    BlockSumLaw::new(d, n, mc_cdf_samples)?.pair(u)
}

/// `E[exp(C|X − Y|)]` by midpoint quadrature over `u` on `grid` points.
pub fn skorohod_exp_moment(law: &BlockSumLaw, c: f64, grid: usize) -> f64 {
    let g = grid as f64;
    (0..grid)
        .map(|i| {
            let u = (i as f64 + 0.5) / g;
            (c * (law.quantile(u) - normal_quantile(u)).abs()).exp()
        })
        .sum::<f64>()
        / g
}

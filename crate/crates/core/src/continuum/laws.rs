use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use crate::{Error, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::param("alpha", format!("must lie in (0, 1), got {alpha}")))
    }
}

/// `g_t` (last point before `t`) and `d_t` (first point after `t`) of the
/// regenerative set started at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GtDtLaw {
    pub x: f64,
    pub t: f64,
    pub alpha: f64,
}

impl GtDtLaw {
    pub fn new(x: f64, t: f64, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(x < t) {
            return Err(Error::param("x", format!("start {x} must lie before t = {t}")));
        }
        Ok(Self { x, t, alpha })
    }

    pub fn g_cdf(&self, y: f64) -> f64 {
        g_cdf(self.x, self.t, self.alpha, y)
    }

    pub fn d_cdf(&self, y: f64) -> f64 {
        d_cdf(self.x, self.t, self.alpha, y)
    }
}

/// `P_x(g_t ≤ y)`: `(g_t − x)/(t − x)` is Beta(α, 1−α).
pub fn g_cdf(x: f64, t: f64, alpha: f64, y: f64) -> f64 {
    if y <= x {
        0.0
    } else if y >= t {
        1.0
    } else {
        beta_reg(alpha, 1.0 - alpha, (y - x) / (t - x))
    }
}

/// `P_x(d_t ≤ y)`: `(d_t − t)/(d_t − x)` is Beta(1−α, α).
pub fn d_cdf(x: f64, t: f64, alpha: f64, y: f64) -> f64 {
    if y <= t {
        0.0
    } else {
        beta_reg(1.0 - alpha, alpha, (y - t) / (y - x))
    }
}

pub fn sample_g<R: Rng + ?Sized>(x: f64, t: f64, alpha: f64, rng: &mut R) -> Result<f64> {
    check_alpha(alpha)?;
    if !(x < t) {
        return Err(Error::param("x", format!("start {x} must lie before t = {t}")));
    }
    let b = Beta::new(alpha, 1.0 - alpha).map_err(|e| Error::param("alpha", e.to_string()))?;
    Ok(x + (t - x) * b.sample(rng))
}

/// Given `g_t = a`, `d_t − a` is Pareto with scale `t − a` and index `α`.
pub fn sample_d_given_g<R: Rng + ?Sized>(a: f64, t: f64, alpha: f64, rng: &mut R) -> Result<f64> {
    check_alpha(alpha)?;
    if !(a < t) {
        return Err(Error::param("a", format!("g_t = {a} must lie before t = {t}")));
    }
    loop {
        let u = 1.0 - rng.random::<f64>();
        let d = a + (t - a) * u.powf(-1.0 / alpha);
        if d > t {
            return Ok(d);
        }
    }
}

pub fn sample_d<R: Rng + ?Sized>(x: f64, t: f64, alpha: f64, rng: &mut R) -> Result<f64> {
    let g = sample_g(x, t, alpha, rng)?;
    sample_d_given_g(g, t, alpha, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::tanh_sinh;
    use crate::rng::rng_for;
    use std::f64::consts::PI;

    #[test]
    fn arcsine_median_and_mean() {
        assert!((g_cdf(0.0, 1.0, 0.5, 0.5) - 0.5).abs() < 1e-14);
        let mut rng = rng_for(1, &[]);
        let n = 100_000;
        let m: f64 = (0..n).map(|_| sample_g(0.0, 1.0, 0.3, &mut rng).unwrap()).sum::<f64>() / n as f64;
        assert!((m - 0.3).abs() < 0.005, "{m}");
    }

    #[test]
    fn conditional_d_example() {
        // P(d₁ ≤ 2 | g₁ = 0) = 1 − (1/2)^{1/2}
        let mut rng = rng_for(2, &[]);
        let n = 100_000;
        let hits = (0..n)
            .filter(|_| sample_d_given_g(0.0, 1.0, 0.5, &mut rng).unwrap() <= 2.0)
            .count() as f64
            / n as f64;
        assert!((hits - (1.0 - 0.5f64.sqrt())).abs() < 0.005, "{hits}");
    }

    /// Direct quadrature of the joint (g, d) density against the closed form.
    #[test]
    fn d_cdf_matches_joint_density_quadrature() {
        for &alpha in &[0.3, 0.5, 0.8] {
            let c = alpha * (PI * alpha).sin() / PI;
            let (x, t) = (0.0, 1.0);
            for &y in &[1.1, 2.0, 5.0] {
                // P(d ≤ y) = ∫_x^t da c (a−x)^{α−1} ∫_t^y (b−a)^{−1−α} db
                //          = ∫_x^t c (a−x)^{α−1} [(t−a)^{−α} − (y−a)^{−α}]/α da
                let q = tanh_sinh(
                    |a, xa, tb| c * xa.powf(alpha - 1.0) * (tb.powf(-alpha) - (y - a).powf(-alpha)) / alpha,
                    x,
                    t,
                    1e-12,
                )
                .value;
                assert!((q - d_cdf(x, t, alpha, y)).abs() < 1e-8, "{alpha} {y}: {q}");
            }
        }
        assert!((d_cdf(0.0, 1.0, 0.5, 2.0) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn scale_invariance() {
        let mut r1 = rng_for(3, &[]);
        let mut r2 = rng_for(3, &[]);
        for _ in 0..100 {
            let a = sample_g(0.0, 1.0, 0.6, &mut r1).unwrap();
            let b = sample_g(0.0, 7.0, 0.6, &mut r2).unwrap();
            assert!((7.0 * a - b).abs() < 1e-12);
        }
        assert!(sample_g(1.0, 1.0, 0.5, &mut r1).is_err());
        assert!(sample_d_given_g(2.0, 1.0, 0.5, &mut r1).is_err());
    }
}

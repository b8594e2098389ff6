use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::{levy_constant, ExcursionDecomposition};
use crate::numerics::tanh_sinh;
use crate::stats::{median, Moments};
use crate::{Error, Result};

/// Jump size below which the Monte Carlo side uses the compensator.
pub const CAMPBELL_CUTOFF: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampbellResult {
    pub analytic: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
}

/// `E[exp(2λ Σ f(ΔL))]` for `f(x) = x^{1−ε}·1{x ≤ 2}` over the jumps of the
/// subordinator during local time `m`, by Campbell's formula and by
/// simulation of the Poisson point process.
pub fn campbell_check<R: Rng + ?Sized>(
    lambda_c: f64,
    eps: f64,
    m: f64,
    alpha: f64,
    mc: usize,
    rng: &mut R,
) -> Result<CampbellResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    if !(eps > 0.0 && eps < 1.0 - alpha) {
        return Err(Error::param(
            "eps",
            format!("must lie in (0, 1 − α) = (0, {}), got {eps}", 1.0 - alpha),
        ));
    }
    if !(m > 0.0) || !(lambda_c >= 0.0) || mc == 0 {
        return Err(Error::param("m", "need m > 0, lambda_c >= 0 and mc >= 1"));
    }
    let c = levy_constant(alpha);
    let q = tanh_sinh(
        |_, x, _| {
            // (e^y − 1)/x^{1+α} = 2λ (e^y − 1)/y · x^{−α−ε}, y = 2λ x^{1−ε}
            let y = 2.0 * lambda_c * x.powf(1.0 - eps);
            let ratio = if y == 0.0 { 1.0 } else { y.exp_m1() / y };
            2.0 * lambda_c * ratio * x.powf(-alpha - eps)
        },
        0.0,
        2.0,
        1e-12,
    )
    .value;
    let analytic = (m * c * q).exp();

    let eta = CAMPBELL_CUTOFF;
    let top = 2f64.powf(-alpha);
    let bottom = eta.powf(-alpha);
    let mean_count = m * c * (bottom - top) / alpha;
    let comp = m * c * eta.powf(1.0 - eps - alpha) / (1.0 - eps - alpha);
    let poisson = Poisson::new(mean_count).map_err(|e| Error::param("m", e.to_string()))?;
    let mut mom = Moments::new();
    for _ in 0..mc {
        let n = poisson.sample(rng) as u64;
        let mut s = comp;
        for _ in 0..n {
            let u: f64 = rng.random();
            let x = (bottom - u * (bottom - top)).powf(-1.0 / alpha);
            s += x.powf(1.0 - eps);
        }
        mom.push((2.0 * lambda_c * s).exp());
    }
    Ok(CampbellResult {
        analytic,
        mc_mean: mom.mean,
        mc_stderr: mom.stderr(),
    })
}

/// Small-δ limit of `δ·N_δ / A_δ`: `(1−α)/α`.
pub fn excursion_scaling_limit(alpha: f64) -> f64 {
    (1.0 - alpha) / alpha
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub delta: f64,
    /// Gaps wider than δ meeting `(0, t)`.
    pub count: usize,
    /// Length of gaps of width at most δ, sub-cutoff mass included.
    pub area: f64,
    /// `δ^α N_δ / (A_δ δ^{α−1})`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub deltas: Vec<f64>,
    /// `rows[i][j]`: sample `i`, threshold `deltas[j]`.
    pub rows: Vec<Vec<ScalingRow>>,
    pub median_ratio: Vec<f64>,
}

pub fn excursion_scaling_check(exc: &[ExcursionDecomposition], deltas: &[f64]) -> ScalingTable {
    let rows: Vec<Vec<ScalingRow>> = exc
        .iter()
        .map(|e| {
            deltas
                .iter()
                .map(|&delta| {
                    let mut count = 0usize;
                    let mut area = e.drift_comp;
                    for &(l, r) in &e.gaps {
                        if l >= e.t {
                            continue;
                        }
                        if r - l > delta {
                            count += 1;
                        } else {
                            area += r.min(e.t) - l;
                        }
                    }
                    let ratio = delta * count as f64 / area;
                    ScalingRow {
                        delta,
                        count,
                        area,
                        ratio,
                    }
                })
                .collect()
        })
        .collect();
    let median_ratio = (0..deltas.len())
        .map(|j| median(&rows.iter().map(|r| r[j].ratio).collect::<Vec<_>>()))
        .collect();
    ScalingTable {
        deltas: deltas.to_vec(),
        rows,
        median_ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::sample_regenerative_excursions;
    use crate::rng::rng_for;

    #[test]
    fn campbell_zero_coupling_is_exact() {
        let mut rng = rng_for(1, &[]);
        let r = campbell_check(0.0, 0.25, 1.0, 0.5, 100, &mut rng).unwrap();
        assert_eq!((r.analytic, r.mc_mean, r.mc_stderr), (1.0, 1.0, 0.0));
        assert!(campbell_check(0.1, 0.6, 1.0, 0.5, 10, &mut rng).is_err());
    }

    #[test]
    fn campbell_monotone_in_m() {
        let mut rng = rng_for(2, &[]);
        let a = campbell_check(0.1, 0.25, 1.0, 0.5, 1, &mut rng).unwrap().analytic;
        let b = campbell_check(0.1, 0.25, 2.0, 0.5, 1, &mut rng).unwrap().analytic;
        assert!(b > a && a > 1.0);
        assert!((b - a * a).abs() < 1e-12);
    }

    #[test]
    fn scaling_table_monotonicity() {
        let mut rng = rng_for(3, &[]);
        let exc: Vec<_> = (0..20)
            .map(|_| sample_regenerative_excursions(1.0, 0.5, 1e-5, &mut rng).unwrap())
            .collect();
        let deltas = [1e-4, 1e-3, 1e-2];
        let tab = excursion_scaling_check(&exc, &deltas);
        for row in &tab.rows {
            assert!(row[0].count >= row[1].count && row[1].count >= row[2].count);
            assert!(row[0].area <= row[1].area && row[1].area <= row[2].area);
        }
    }
}

use serde::{Deserialize, Serialize};

use super::{sample_regenerative_excursions, BrownianPath};
use crate::model::CouplingParams;
use crate::numerics::log_half_one_plus_exp;
use crate::rng::{derive_seed, rng_for};
use crate::stats::Moments;
use crate::{Error, Result};

pub const DEFAULT_GRID_M: usize = 16;
const DEFAULT_SAMPLES: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StartPointEstimate {
    pub x: f64,
    pub value: f64,
    pub stderr: f64,
}

/// Minimum over the start-point grid of the per-point Monte Carlo means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModifiedEstimate {
    pub s: f64,
    pub t: f64,
    pub value: f64,
    pub stderr: f64,
    pub argmin: usize,
    pub grid: Vec<StartPointEstimate>,
}

/// Monte Carlo estimate of `E_x[exp(H_{x, d_{t−1}}), d_{t−1} < t]` for a
/// fixed Brownian path. Sample `i` uses the set drawn from `(seed, i)`, so
/// different start points see common random numbers.
#[allow(clippy::too_many_arguments)]
pub fn start_point_estimate(
    beta: &mut BrownianPath,
    x: f64,
    t: f64,
    p: CouplingParams,
    alpha: f64,
    eta: f64,
    samples: usize,
    seed: u64,
) -> Result<StartPointEstimate> {
    let horizon = t - 1.0 - x;
    if horizon <= 0.0 {
        // The start point already lies in (t−1, t): empty Hamiltonian.
        return Ok(StartPointEstimate {
            x,
            value: 1.0,
            stderr: 0.0,
        });
    }
    if samples == 0 {
        return Err(Error::param("samples", "must be at least 1"));
    }
    let eta = eta.min(horizon / 10.0);
    let mut m = Moments::new();
    for i in 0..samples {
        let mut rng = rng_for(seed, &[i as u64]);
        let exc = sample_regenerative_excursions(horizon, alpha, eta, &mut rng)?;
        let d = x + exc.observed_end();
        if d >= t {
            m.push(0.0);
            continue;
        }
        let mut log_w = 0.0;
        if p.lambda != 0.0 {
            for &(l, r) in &exc.gaps {
                let db = beta.increment(x + l, x + r);
                log_w += log_half_one_plus_exp(-2.0 * p.lambda * (db + p.h * (r - l)));
            }
        }
        m.push(log_w.exp());
    }
    Ok(StartPointEstimate {
        x,
        value: m.mean,
        stderr: m.stderr(),
    })
}

/// The modified partition function `Z̃*_{s,t}` on a uniform grid of
/// `grid_m` start points in `[s−1, min(s, t−1)]`, for a given path `beta`.
#[allow(clippy::too_many_arguments)]
pub fn modified_partition(
    beta: &mut BrownianPath,
    s: f64,
    t: f64,
    grid_m: usize,
    p: CouplingParams,
    alpha: f64,
    eta: f64,
    samples: usize,
    seed: u64,
) -> Result<ModifiedEstimate> {
    if !(s >= 0.0 && t > s) {
        return Err(Error::param("t", format!("need t > s >= 0, got s = {s}, t = {t}")));
    }
    if grid_m < 2 {
        return Err(Error::param("grid_m", "must be at least 2"));
    }
    let lo = s - 1.0;
    let hi = s.min(t - 1.0);
    let mut grid = Vec::with_capacity(grid_m);
    for i in 0..grid_m {
        let x = lo + (hi - lo) * i as f64 / (grid_m - 1) as f64;
        grid.push(start_point_estimate(beta, x, t, p, alpha, eta, samples, seed)?);
    }
    let (argmin, best) = grid
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value))
        .map(|(i, g)| (i, *g))
        .expect("grid is nonempty");
    Ok(ModifiedEstimate {
        s,
        t,
        value: best.value,
        stderr: best.stderr,
        argmin,
        grid,
    })
}

/// `log Z̃*_{s,t}` for a fresh Brownian path, with 400 set samples per
/// start point.
pub fn modified_log_partition<R: rand::Rng + ?Sized>(
    s: f64,
    t: f64,
    grid_m: usize,
    p: CouplingParams,
    alpha: f64,
    eta: f64,
    rng: &mut R,
) -> Result<f64> {
    let root: u64 = rng.random();
    let mut beta = BrownianPath::new(derive_seed(root, &[0]));
    let est = modified_partition(
        &mut beta,
        s,
        t,
        grid_m,
        p,
        alpha,
        eta,
        DEFAULT_SAMPLES,
        derive_seed(root, &[1]),
    )?;
    Ok(est.value.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::d_cdf;

    #[test]
    fn degenerate_start_points() {
        let mut b = BrownianPath::new(1);
        let p = CouplingParams::new(1.0, 0.3).unwrap();
        let (s, t) = (2.0, 2.5);
        for x in [1.6, 1.8, 2.0] {
            let e = start_point_estimate(&mut b, x, t, p, 0.5, 1e-3, 10, 3).unwrap();
            assert_eq!((e.value, e.stderr), (1.0, 0.0));
        }
        let m = modified_partition(&mut b, s, t, 5, p, 0.5, 1e-3, 50, 3).unwrap();
        assert!((m.grid.last().unwrap().x - 1.5).abs() < 1e-15);
    }

    #[test]
    fn zero_coupling_matches_d_law() {
        let mut b = BrownianPath::new(2);
        let p = CouplingParams::new(0.0, 0.0).unwrap();
        let (s, t, alpha) = (1.0, 3.0, 0.5);
        let m = modified_partition(&mut b, s, t, 4, p, alpha, 1e-3, 4000, 9).unwrap();
        for g in &m.grid {
            let exact = d_cdf(g.x, t - 1.0, alpha, t);
            assert!((g.value - exact).abs() < 4.0 * g.stderr + 0.01, "{g:?} vs {exact}");
        }
        let exact_min = d_cdf(s - 1.0, t - 1.0, alpha, t);
        assert!((m.value - exact_min).abs() < 4.0 * m.stderr + 0.01);
    }
}

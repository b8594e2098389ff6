//! Quenched continuum free energy on a uniform grid.
//!
//! The regenerative set with jump cutoff equal to the cell width `g` is
//! discretized cell by cell: the compensating drift crosses a cell without a
//! jump with probability `p = exp(−(1−α)/α)`, and a jump of Pareto(α, g) size
//! is rounded to the nearest number of cells. The result is a renewal process
//! on the grid whose sign-averaged partition function is computed exactly,
//! for a Brownian path sampled on the grid.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::discrete::kernel::{log_partition, RenewalWeights};
use crate::discrete::{EstimateMode, FreeEnergyEstimate};
use crate::model::CouplingParams;
use crate::rng::rng_for;
use crate::stats::Moments;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GridRegenerativeLaw {
    alpha: f64,
    cells: usize,
    p_drift: f64,
    k: Vec<f64>,
    kbar: Vec<f64>,
}

impl GridRegenerativeLaw {
    pub fn new(alpha: f64, cells: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::param("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        if cells == 0 {
            return Err(Error::param("cells", "must be positive"));
        }
        let p_drift = (-(1.0 - alpha) / alpha).exp();
        let jump = 1.0 - p_drift;
        let surv = |m: f64| (m + 0.5).powf(-alpha);
        let mut k = vec![0.0; cells + 1];
        let mut kbar = vec![1.0; cells + 1];
        for m in 1..=cells {
            let lo = if m == 1 { 1.0 } else { surv(m as f64 - 1.0) };
            k[m] = jump * (lo - surv(m as f64));
            kbar[m] = jump * surv(m as f64);
        }
        Ok(Self {
            alpha,
            cells,
            p_drift,
            k,
            kbar,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn p_drift(&self) -> f64 {
        self.p_drift
    }

    /// `log Z̃` for a Brownian path given at the grid points `0, g, …, n·g`.
    pub fn log_partition(&self, beta: &[f64], cell: f64, p: CouplingParams) -> Result<f64> {
        if beta.len() != self.cells + 1 {
            return Err(Error::Inconsistent(format!(
                "path has {} grid values, law expects {}",
                beta.len(),
                self.cells + 1
            )));
        }
        if p.lambda == 0.0 {
            return Ok(0.0);
        }
        let e: Vec<f64> = beta
            .iter()
            .enumerate()
            .map(|(j, b)| -2.0 * p.lambda * (b + p.h * cell * j as f64))
            .collect();
        let w = RenewalWeights {
            k: &self.k,
            kbar: &self.kbar,
            neutral: self.p_drift,
        };
        Ok(log_partition(&w, &e))
    }
}

/// `(1/t)·E log Z̃_t` over `replicas` Brownian paths on `⌈t·cells_per_unit⌉` cells.
pub fn estimate_continuum_free_energy(
    alpha: f64,
    p: CouplingParams,
    t: f64,
    cells_per_unit: f64,
    replicas: usize,
    seed: u64,
) -> Result<FreeEnergyEstimate> {
    if replicas == 0 {
        return Err(Error::param("replicas", "must be at least 1"));
    }
    let cells = (t * cells_per_unit).round().max(1.0) as usize;
    let law = GridRegenerativeLaw::new(alpha, cells)?;
    let g = t / cells as f64;
    let samples = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, &[r as u64]);
            let mut beta = Vec::with_capacity(cells + 1);
            let mut b = 0.0;
            beta.push(b);
            for _ in 0..cells {
                b += g.sqrt() * rng.sample::<f64, _>(StandardNormal);
                beta.push(b);
            }
            law.log_partition(&beta, g, p).map(|v| v / t)
        })
        .collect::<Result<Vec<f64>>>()?;
    let m = Moments::from_slice(&samples);
    Ok(FreeEnergyEstimate {
        value: m.mean,
        stderr: m.stderr(),
        n: cells,
        replicas,
        mode: EstimateMode::ReplicaAverage,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_law_is_normalized() {
        let law = GridRegenerativeLaw::new(0.5, 5000).unwrap();
        let total: f64 = law.k.iter().sum::<f64>() + law.kbar[5000] + law.p_drift;
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn zero_coupling_and_nonnegativity() {
        let z = estimate_continuum_free_energy(0.5, CouplingParams::new(0.0, 1.0).unwrap(), 5.0, 20.0, 4, 1).unwrap();
        assert_eq!((z.value, z.stderr), (0.0, 0.0));
        let f = estimate_continuum_free_energy(0.5, CouplingParams::new(1.0, 0.1).unwrap(), 20.0, 16.0, 16, 2).unwrap();
        assert!(f.value > -3.0 * f.stderr - 0.05, "{f:?}");
    }
}

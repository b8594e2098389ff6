use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{RenewalMassFunction, TailedRenewalLaw};
use crate::numerics::tanh_sinh;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RnEntry {
    pub y: f64,
    pub z: f64,
    pub j_value: f64,
    pub i_value: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RnReport {
    pub n: usize,
    pub eps: f64,
    pub entries: Vec<RnEntry>,
}

impl RnReport {
    pub fn build(
        k: &TailedRenewalLaw,
        u: &RenewalMassFunction,
        ys: &[f64],
        zs: &[f64],
        eps: f64,
        n: usize,
    ) -> Result<Self> {
        let grid: Vec<(f64, f64)> = ys.iter().flat_map(|&y| zs.iter().map(move |&z| (y, z))).collect();
        let entries = grid
            .par_iter()
            .map(|&(y, z)| rn_ratio(k, u, y, z, eps, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, eps, entries })
    }
}

/// `(sin πα/π) ∫_y^1 (s−y)^{α−1} [(z−s)^{−α} − (z+ε−s)^{−α}] ds`: the
/// probability that the first point of the regenerative set after 1, started
/// from `y`, falls in `(z, z+ε]`.
pub fn i_integral(alpha: f64, y: f64, z: f64, eps: f64) -> f64 {
    let q = tanh_sinh(
        |_, from_y, to_one| {
            from_y.powf(alpha - 1.0) * (((z - 1.0) + to_one).powf(-alpha) - ((z + eps - 1.0) + to_one).powf(-alpha))
        },
        y,
        1.0,
        1e-10,
    );
    (alpha * PI).sin() / PI * q.value
}

fn grid_index(what: &'static str, x: f64, n: usize) -> Result<usize> {
    let v = x * n as f64;
    let r = v.round();
    if (v - r).abs() > 1e-9 * r.max(1.0) {
        return Err(Error::NonIntegerRatio { what, value: v });
    }
    Ok(r as usize)
}

/// `J_n(y,z) = Σ_{ny≤k≤n, nz<l≤n(z+ε)} U(k−ny) K(l−k)` against `I(y,z)`.
pub fn rn_ratio(k: &TailedRenewalLaw, u: &RenewalMassFunction, y: f64, z: f64, eps: f64, n: usize) -> Result<RnEntry> {
    if !(0.0..=1.0 / 3.0 + 1e-12).contains(&y) {
        return Err(Error::param("y", format!("must lie in [0, 1/3], got {y}")));
    }
    if !(z >= 1.0) || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(
            "z",
            format!("need z ≥ 1 and ε in (0,1), got z = {z}, ε = {eps}"),
        ));
    }
    let ny = grid_index("n*y", y, n)?;
    let nz = grid_index("n*z", z, n)?;
    let ne = grid_index("n*eps", eps, n)?;
    if u.len() <= n - ny {
        return Err(Error::HorizonExceeded {
            requested: n - ny,
            available: u.len().saturating_sub(1),
        });
    }
    if nz + ne - ny > k.horizon() {
        return Err(Error::HorizonExceeded {
            requested: nz + ne - ny,
            available: k.horizon(),
        });
    }
    let j_value: f64 = (ny..=n)
        .map(|kk| u.u(kk - ny) * (k.tail(nz - kk) - k.tail(nz + ne - kk)))
        .sum();
    let i_value = i_integral(k.alpha(), y, z, eps);
    Ok(RnEntry {
        y,
        z,
        j_value,
        i_value,
        ratio: j_value / i_value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaRow {
    pub z: f64,
    /// `sup_{y,ỹ} |log(J(y,z)/I(ỹ,z))|`.
    pub g: f64,
    /// `g/(log z + 1)`.
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaReport {
    pub eps: f64,
    pub n: usize,
    pub rows: Vec<KappaRow>,
    pub kappa: f64,
}

/// Measured `κ̂(ε, n)` over starting points `ys` (used for both the discrete
/// and the continuum start) and return levels `zs`.
pub fn skeleton_log_rn_bound(
    k: &TailedRenewalLaw,
    u: &RenewalMassFunction,
    ys: &[f64],
    zs: &[f64],
    eps: f64,
    n: usize,
) -> Result<KappaReport> {
    let rows = zs
        .par_iter()
        .map(|&z| {
            let js = ys
                .iter()
                .map(|&y| rn_ratio(k, u, y, z, eps, n).map(|e| e.j_value))
                .collect::<Result<Vec<_>>>()?;
            let is: Vec<f64> = ys.iter().map(|&y| i_integral(k.alpha(), y, z, eps)).collect();
            let g = js
                .iter()
                .flat_map(|j| is.iter().map(move |i| (j / i).ln().abs()))
                .fold(0.0, f64::max);
            Ok(KappaRow {
                z,
                g,
                kappa: g / (z.ln() + 1.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let kappa = rows.iter().map(|r| r.kappa).fold(0.0, f64::max);
    Ok(KappaReport { eps, n, rows, kappa })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::d_cdf;
    use crate::model::{renewal_mass_function, SlowlyVarying, TailShape};

    #[test]
    fn i_matches_first_passage_law() {
        for &alpha in &[0.3, 0.5, 0.8] {
            for &(y, z) in &[(0.0, 1.0), (0.1, 2.0), (0.3, 5.0)] {
                let direct = d_cdf(y, 1.0, alpha, z + 0.2) - d_cdf(y, 1.0, alpha, z);
                let i = i_integral(alpha, y, z, 0.2);
                assert!(
                    (i / direct - 1.0).abs() < 1e-7,
                    "α={alpha} y={y} z={z}: {i} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn ratio_close_to_one_for_large_n() {
        let k = TailedRenewalLaw::new(
            0.5,
            SlowlyVarying::Constant { c: 1.0 },
            20_000,
            1,
            TailShape::Normalized,
        )
        .unwrap();
        let u = renewal_mass_function(&k, 1000).unwrap();
        let e = rn_ratio(&k, &u, 0.0, 1.0, 0.2, 1000).unwrap();
        assert!((e.ratio - 1.0).abs() < 0.1, "{e:?}");
        assert!(e.i_value > 0.0 && e.j_value >= 0.0);
        assert!(matches!(
            rn_ratio(&k, &u, 0.0, 1.0, 0.2, 2000),
            Err(Error::HorizonExceeded { .. })
        ));
        assert!(matches!(
            rn_ratio(&k, &u, 0.0, 1.0, 0.2001, 1000),
            Err(Error::NonIntegerRatio { .. })
        ));
    }
}

//! Browser bindings. Every function takes plain numbers and returns a flat
//! `Float64Array`, so the page needs no glue beyond `wasm-bindgen`.

use std::f64::consts::PI;

use wasm_bindgen::prelude::*;

use copolymer::continuum::sample_regenerative_excursions;
use copolymer::discrete::{log_partition_exact, DisorderSample};
use copolymer::model::{build_renewal_law, renewal_mass_function, CouplingParams, DisorderLaw, SlowlyVarying};
use copolymer::rng::rng_for;

fn js_err(e: copolymer::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `(1/N) log Z` for one Gaussian disorder sample, on `points` values of `h`
/// evenly spaced in `[0, h_max]`. Returns `h` and `f` interleaved.
#[wasm_bindgen]
pub fn free_energy_scan(
    alpha: f64,
    lambda: f64,
    h_max: f64,
    n: usize,
    points: usize,
    seed: u64,
) -> Result<Vec<f64>, JsError> {
    let k = build_renewal_law(alpha, SlowlyVarying::Constant { c: 1.0 }, n.max(1), 1).map_err(js_err)?;
    let w = DisorderSample::generate(&DisorderLaw::gaussian(), n, seed);
    let mut out = Vec::with_capacity(2 * points);
    for i in 0..points {
        let h = if points > 1 {
            h_max * i as f64 / (points - 1) as f64
        } else {
            0.0
        };
        let p = CouplingParams::new(lambda, h).map_err(js_err)?;
        let z = log_partition_exact(&w, &k, p).map_err(js_err)?.log_z;
        out.extend([h, z / n as f64]);
    }
    Ok(out)
}

/// Excursions of the α-stable regenerative set on `[0, t]` with gaps shorter
/// than `eta` swept into drift. Returns `(left, right, sign)` triples.
#[wasm_bindgen]
pub fn regenerative_set(alpha: f64, t: f64, eta: f64, seed: u64) -> Result<Vec<f64>, JsError> {
    let mut rng = rng_for(seed, &[]);
    let e = sample_regenerative_excursions(t, alpha, eta, &mut rng).map_err(js_err)?;
    Ok(e.gaps
        .iter()
        .zip(&e.signs)
        .flat_map(|(&(l, r), &s)| [l, r.min(t), f64::from(s)])
        .collect())
}

/// `U(ℓ)·ℓ^{1−α}·L(ℓ)·π/(α sin πα)` at `points` log-spaced ℓ up to `n`, for the
/// constant-L law. Returns `ℓ` and the ratio interleaved.
#[wasm_bindgen]
pub fn renewal_ratio(alpha: f64, n: usize, points: usize) -> Result<Vec<f64>, JsError> {
    let k = build_renewal_law(alpha, SlowlyVarying::Constant { c: 1.0 }, n.max(1), 1).map_err(js_err)?;
    let u = renewal_mass_function(&k, n).map_err(js_err)?;
    let mut out = Vec::new();
    let mut last = 0;
    for i in 0..points {
        let l = (n as f64).powf(i as f64 / (points.max(2) - 1) as f64).round() as usize;
        if l <= last {
            continue;
        }
        last = l;
        let x = l as f64;
        let r = u.u(l) * k.l_eff(x) * x.powf(1.0 - alpha) * PI / (alpha * (PI * alpha).sin());
        out.extend([x, r]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_is_nonincreasing_in_h() {
        let v = free_energy_scan(0.5, 1.0, 2.0, 200, 9, 3).unwrap();
        assert_eq!(v.len(), 18);
        for w in v.chunks(2).collect::<Vec<_>>().windows(2) {
            assert!(w[1][1] <= w[0][1]);
        }
    }

    #[test]
    fn gaps_are_ordered_and_signed() {
        let v = regenerative_set(0.5, 1.0, 1e-3, 7).unwrap();
        assert_eq!(v.len() % 3, 0);
        for g in v.chunks(3) {
            assert!(g[0] < g[1] && g[1] <= 1.0 && (g[2] == 0.0 || g[2] == 1.0));
        }
    }

    #[test]
    fn ratio_approaches_one() {
        let v = renewal_ratio(0.5, 10_000, 5).unwrap();
        let last = v[v.len() - 1];
        assert!((last - 1.0).abs() < 0.01, "{last}");
    }
}

//! Shared O(N²) renewal dynamic program.
//!
//! With `E_j = exp(e_j)`, the sign-averaged excursion weight between renewals
//! at `i < j` is `½(1 + E_j/E_i)`, so
//! `z(j) = ½ Σ_i z(i) K(j−i) + ½ E_j Σ_i (z(i)/E_i) K(j−i)`:
//! two plain convolutions. They are evaluated on blocks of `CHUNK` indices,
//! each stored as a log scale plus linear mantissas, so the inner loop is a
//! dot product and the dynamic range stays unbounded.

use std::f64::consts::LN_2;

use crate::numerics::{log_add_exp, log_half_one_plus_exp, LogAccumulator};

const CHUNK: usize = 128;

/// Inter-arrival weights for the dynamic program.
pub(crate) struct RenewalWeights<'a> {
    /// `k[m]`, `m = 0..=n`, with `k[0] = 0`.
    pub k: &'a [f64],
    /// `kbar[m]`, weight of an excursion that is still open after `m` steps.
    pub kbar: &'a [f64],
    /// Weight of a unit step that carries no excursion.
    pub neutral: f64,
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        s[0] += x[0] * y[0];
        s[1] += x[1] * y[1];
        s[2] += x[2] * y[2];
        s[3] += x[3] * y[3];
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    (s[0] + s[1]) + (s[2] + s[3]) + tail
}

fn finalize_chunk(logs: &[f64], mant: &mut [f64]) -> f64 {
    let scale = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if scale == f64::NEG_INFINITY {
        mant.iter_mut().for_each(|m| *m = 0.0);
        return 0.0;
    }
    for (m, &l) in mant.iter_mut().zip(logs) {
        *m = (l - scale).exp();
    }
    scale
}

/// Log of the sign-averaged partition function for log-energies `e_0..=e_n`.
pub(crate) fn log_partition(w: &RenewalWeights<'_>, e: &[f64]) -> f64 {
    let n = e.len() - 1;
    if n == 0 {
        return 0.0;
    }
    let ln_neutral = if w.neutral > 0.0 {
        w.neutral.ln()
    } else {
        f64::NEG_INFINITY
    };
    let lnk: Vec<f64> = w.k[..=n]
        .iter()
        .map(|&x| if x > 0.0 { x.ln() } else { f64::NEG_INFINITY })
        .collect();
    // krev[x] = k[n − x], so k[j − i] = krev[n − j + i] runs forward in i.
    let krev: Vec<f64> = (0..=n).map(|x| w.k[n - x]).collect();

    let mut la = vec![f64::NEG_INFINITY; n + 1];
    let mut lc = vec![f64::NEG_INFINITY; n + 1];
    let mut ma = vec![0.0; n + 1];
    let mut mc = vec![0.0; n + 1];
    let mut scale_a: Vec<f64> = Vec::new();
    let mut scale_c: Vec<f64> = Vec::new();
    la[0] = 0.0;
    lc[0] = -e[0];

    for j in 1..=n {
        let done = scale_a.len() * CHUNK;
        let off = n - j;
        let mut acc_a = LogAccumulator::new();
        let mut acc_c = LogAccumulator::new();
        for c in 0..scale_a.len() {
            let (s, t) = (c * CHUNK, (c + 1) * CHUNK);
            let kr = &krev[off + s..off + t];
            acc_a.add_scaled(scale_a[c], dot(&ma[s..t], kr));
            acc_c.add_scaled(scale_c[c], dot(&mc[s..t], kr));
        }
        for i in done..j {
            let l = lnk[j - i];
            if l > f64::NEG_INFINITY {
                acc_a.add(la[i] + l);
                acc_c.add(lc[i] + l);
            }
        }
        let mut lz = -LN_2 + log_add_exp(acc_a.value(), e[j] + acc_c.value());
        if w.neutral > 0.0 {
            lz = log_add_exp(lz, ln_neutral + la[j - 1]);
        }
        la[j] = lz;
        lc[j] = lz - e[j];
        if (j + 1) % CHUNK == 0 {
            let (s, t) = (j + 1 - CHUNK, j + 1);
            scale_a.push(finalize_chunk(&la[s..t], &mut ma[s..t]));
            scale_c.push(finalize_chunk(&lc[s..t], &mut mc[s..t]));
        }
    }

    let mut acc = LogAccumulator::new();
    for i in 0..n {
        let kb = w.kbar[n - i];
        if kb > 0.0 && la[i] > f64::NEG_INFINITY {
            acc.add(la[i] + kb.ln() + log_half_one_plus_exp(e[n] - e[i]));
        }
    }
    acc.add(la[n]);
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(w: &RenewalWeights<'_>, e: &[f64]) -> f64 {
        let n = e.len() - 1;
        let phi = |i: usize, j: usize| 0.5 * (1.0 + (e[j] - e[i]).exp());
        let mut z = vec![0.0; n + 1];
        z[0] = 1.0;
        for j in 1..=n {
            let mut s = w.neutral * z[j - 1];
            for i in 0..j {
                s += z[i] * w.k[j - i] * phi(i, j);
            }
            z[j] = s;
        }
        let mut tot = z[n];
        for i in 0..n {
            tot += z[i] * w.kbar[n - i] * phi(i, n);
        }
        tot.ln()
    }

    #[test]
    fn chunked_matches_naive_across_chunk_boundaries() {
        let n = 3 * CHUNK + 17;
        let k: Vec<f64> = (0..=n)
            .map(|m| if m == 0 { 0.0 } else { 0.4 * (m as f64).powf(-1.5) })
            .collect();
        let kbar: Vec<f64> = (0..=n).map(|m| 0.6 * (m as f64 + 1.0).powf(-0.5)).collect();
        let e: Vec<f64> = (0..=n)
            .map(|j| 0.3 * ((j * 37 % 11) as f64 - 5.0) - 0.01 * j as f64)
            .collect();
        for neutral in [0.0, 0.3] {
            let w = RenewalWeights {
                k: &k,
                kbar: &kbar,
                neutral,
            };
            let a = log_partition(&w, &e);
            let b = naive(&w, &e);
            assert!((a - b).abs() < 1e-11 * b.abs().max(1.0), "{a} {b}");
        }
    }
}

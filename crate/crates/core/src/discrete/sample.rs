use crate::model::DisorderLaw;
use crate::rng::rng_for;

/// One disorder realization `ω₁…ω_N` with prefix sums.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderSample {
    omega: Vec<f64>,
    prefix: Vec<f64>,
    seed: u64,
}

impl DisorderSample {
    pub fn new(omega: Vec<f64>, seed: u64) -> Self {
        let mut prefix = Vec::with_capacity(omega.len() + 1);
        let mut w = 0.0;
        prefix.push(w);
        for &x in &omega {
            w += x;
            prefix.push(w);
        }
        Self { omega, prefix, seed }
    }

    /// Draws `n` i.i.d. charges from the stream addressed by `seed`.
    pub fn generate(d: &DisorderLaw, n: usize, seed: u64) -> Self {
        let mut rng = rng_for(seed, &[]);
        let omega = (0..n).map(|_| d.sample(&mut rng)).collect();
        Self::new(omega, seed)
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    /// `ω_i` for `1 ≤ i ≤ N`.
    pub fn omega(&self, i: usize) -> f64 {
        self.omega[i - 1]
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omega
    }

    /// `W(n) = Σ_{i≤n} ω_i`.
    pub fn prefix(&self, n: usize) -> f64 {
        self.prefix[n]
    }

    pub fn prefixes(&self) -> &[f64] {
        &self.prefix
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The first `n` charges.
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            omega: self.omega[..n].to_vec(),
            prefix: self.prefix[..=n].to_vec(),
            seed: self.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_sums() {
        let w = DisorderSample::generate(&DisorderLaw::gaussian(), 500, 9);
        assert_eq!(w.prefix(0), 0.0);
        for n in 1..=500 {
            assert!((w.prefix(n) - w.prefix(n - 1) - w.omega(n)).abs() < 1e-12);
        }
        let again = DisorderSample::generate(&DisorderLaw::gaussian(), 500, 9);
        assert_eq!(w, again);
        assert_eq!(w.truncated(10).prefix(10), w.prefix(10));
    }
}

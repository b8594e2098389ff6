use super::TailedRenewalLaw;
use crate::numerics::CompensatedSum;
use crate::{Error, Result};

/// `U(n) = P(n ∈ τ)` for `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct RenewalMassFunction {
    u: Vec<f64>,
}

pub fn renewal_mass_function(k: &TailedRenewalLaw, n: usize) -> Result<RenewalMassFunction> {
    if n > k.horizon() {
        return Err(Error::HorizonExceeded {
            requested: n,
            available: k.horizon(),
        });
    }
    let t = k.period();
    let kt = k.k_table();
    let mut u = vec![0.0; n + 1];
    u[0] = 1.0;
    for m in (t..=n).step_by(t) {
        let mut s = 0.0;
        let mut j = t;
        while j <= m {
            s += kt[j] * u[m - j];
            j += t;
        }
        u[m] = s;
    }
    Ok(RenewalMassFunction { u })
}

impl RenewalMassFunction {
    pub fn u(&self, n: usize) -> f64 {
        self.u[n]
    }

    pub fn table(&self) -> &[f64] {
        &self.u
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// `Σ_{j≤n} U(j)·K̄(n−j)`, which equals one by the last-renewal decomposition.
    pub fn last_renewal_sum(&self, k: &TailedRenewalLaw, n: usize) -> f64 {
        let mut acc = CompensatedSum::new();
        for j in 0..=n {
            acc.add(self.u[j] * k.tail(n - j));
        }
        acc.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_renewal_law, SlowlyVarying};

    #[test]
    fn first_values() {
        let k = build_renewal_law(0.4, SlowlyVarying::Constant { c: 1.0 }, 200, 2).unwrap();
        let u = renewal_mass_function(&k, 100).unwrap();
        assert_eq!(u.u(0), 1.0);
        assert_eq!(u.u(1), 0.0);
        assert_eq!(u.u(2), k.k(2));
        assert!((u.u(4) - (k.k(4) + k.k(2) * k.k(2))).abs() < 1e-16);
        assert!(renewal_mass_function(&k, 401).is_err());
    }

    #[test]
    fn last_renewal_identity_small() {
        let k = build_renewal_law(0.7, SlowlyVarying::LogPower { a: 1.0 }, 300, 1).unwrap();
        let u = renewal_mass_function(&k, 300).unwrap();
        for n in [0, 1, 17, 300] {
            assert!((u.last_renewal_sum(&k, n) - 1.0).abs() < 1e-12);
        }
    }
}

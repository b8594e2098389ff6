use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::numerics::log_sum_exp;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DisorderKind {
    Gaussian,
    /// ±1 with probability ½ each.
    Binary,
    FiniteSupport {
        values: Vec<f64>,
        probs: Vec<f64>,
    },
}

/// Law of a single charge: zero mean, unit variance.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderLaw {
    kind: DisorderKind,
    t0: f64,
    c0: f64,
    cumulative: Vec<f64>,
}

impl DisorderLaw {
    pub fn gaussian() -> Self {
        Self {
            kind: DisorderKind::Gaussian,
            t0: f64::INFINITY,
            c0: 0.5,
            cumulative: Vec::new(),
        }
    }

    pub fn binary() -> Self {
        Self {
            kind: DisorderKind::Binary,
            t0: f64::INFINITY,
            c0: 0.5,
            cumulative: Vec::new(),
        }
    }

    pub fn finite_support(values: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() != probs.len() {
            return Err(Error::param(
                "disorder.values",
                "values and probs must be nonempty and of equal length",
            ));
        }
        if probs.iter().any(|&p| !(p > 0.0 && p.is_finite())) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param(
                "disorder.probs",
                "probabilities must be positive, values finite",
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::param("disorder.probs", format!("must sum to 1, got {total}")));
        }
        let mean: f64 = values.iter().zip(&probs).map(|(v, p)| v * p).sum();
        let var: f64 = values.iter().zip(&probs).map(|(v, p)| v * v * p).sum::<f64>() - mean * mean;
        if mean.abs() > 1e-12 || (var - 1.0).abs() > 1e-12 {
            return Err(Error::param(
                "disorder.values",
                format!("law must have mean 0 and variance 1, got mean {mean}, variance {var}"),
            ));
        }
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cumulative.push(acc);
        }
        *cumulative.last_mut().unwrap() = 1.0;

        let kind = DisorderKind::FiniteSupport { values, probs };
        let mut law = Self {
            kind,
            t0: f64::INFINITY,
            c0: 0.5,
            cumulative,
        };
        law.c0 = law.fitted_c0();
        Ok(law)
    }

    pub fn from_kind(kind: DisorderKind) -> Result<Self> {
        match kind {
            DisorderKind::Gaussian => Ok(Self::gaussian()),
            DisorderKind::Binary => Ok(Self::binary()),
            DisorderKind::FiniteSupport { values, probs } => Self::finite_support(values, probs),
        }
    }

    pub fn kind(&self) -> &DisorderKind {
        &self.kind
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DisorderKind::Gaussian => "gaussian",
            DisorderKind::Binary => "binary",
            DisorderKind::FiniteSupport { .. } => "finite_support",
        }
    }

    pub fn mean(&self) -> f64 {
        match &self.kind {
            DisorderKind::Gaussian | DisorderKind::Binary => 0.0,
            DisorderKind::FiniteSupport { values, probs } => values.iter().zip(probs).map(|(v, p)| v * p).sum(),
        }
    }

    pub fn variance(&self) -> f64 {
        match &self.kind {
            DisorderKind::Gaussian | DisorderKind::Binary => 1.0,
            DisorderKind::FiniteSupport { values, probs } => {
                let m = self.mean();
                values.iter().zip(probs).map(|(v, p)| (v - m) * (v - m) * p).sum()
            }
        }
    }

    /// `log M(t)`.
    pub fn log_mgf(&self, t: f64) -> Result<f64> {
        if t.abs() > self.t0 {
            return Err(Error::BoundUndefined {
                argument: t,
                window: self.t0,
            });
        }
        Ok(match &self.kind {
            DisorderKind::Gaussian => 0.5 * t * t,
            DisorderKind::Binary => {
                let a = t.abs();
                a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
            }
            DisorderKind::FiniteSupport { values, probs } => {
                let terms: Vec<f64> = values.iter().zip(probs).map(|(v, p)| p.ln() + t * v).collect();
                log_sum_exp(&terms)
            }
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            DisorderKind::Gaussian => rng.sample(StandardNormal),
            DisorderKind::Binary => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            DisorderKind::FiniteSupport { values, .. } => {
                let u: f64 = rng.random();
                let i = self.cumulative.partition_point(|&c| c <= u).min(values.len() - 1);
                values[i]
            }
        }
    }

    fn fitted_c0(&self) -> f64 {
        let mut c0: f64 = 0.5;
        for i in 1..=4000 {
            let t = i as f64 * 0.01;
            for s in [t, -t] {
                if let Ok(l) = self.log_mgf(s) {
                    c0 = c0.max(l / (s * s));
                }
            }
        }
        c0
    }
}

/// `M(t) = E[exp(t ω₁)]`.
pub fn mgf(d: &DisorderLaw, t: f64) -> Result<f64> {
    Ok(d.log_mgf(t)?.exp())
}

/// Lower and upper bounds on the critical point `h_c(λ)`.
pub fn hc_bounds(lambda: f64, alpha: f64, d: &DisorderLaw) -> Result<(f64, f64)> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::param("lambda", format!("must be positive, got {lambda}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    let lower_arg = -2.0 * lambda / (1.0 + alpha);
    let lower = (1.0 + alpha) / (2.0 * lambda) * d.log_mgf(lower_arg)?;
    let upper = d.log_mgf(-2.0 * lambda)? / (2.0 * lambda);
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_for;

    #[test]
    fn closed_forms() {
        let g = DisorderLaw::gaussian();
        let b = DisorderLaw::binary();
        assert!((mgf(&g, 1.0).unwrap() - 0.5f64.exp()).abs() < 1e-15);
        assert!((mgf(&b, 1.0).unwrap() - 1f64.cosh()).abs() < 1e-15);
        assert_eq!(mgf(&g, 0.0).unwrap(), 1.0);
        assert_eq!(mgf(&b, 0.0).unwrap(), 1.0);
        assert!((b.log_mgf(400.0).unwrap() - (400.0 - std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn c0_bound_holds_on_grid() {
        let fs = DisorderLaw::finite_support(vec![-2.0, 0.5], vec![0.2, 0.8]).unwrap();
        for d in [DisorderLaw::gaussian(), DisorderLaw::binary(), fs] {
            for i in -300..=300 {
                let t = i as f64 * 0.05;
                assert!(d.log_mgf(t).unwrap() <= d.c0() * t * t + 1e-12, "{} {t}", d.name());
            }
        }
    }

    #[test]
    fn finite_support_validation_and_sampling() {
        assert!(DisorderLaw::finite_support(vec![-1.0, 2.0], vec![0.5, 0.5]).is_err());
        let d = DisorderLaw::finite_support(vec![-2.0, 0.5], vec![0.2, 0.8]).unwrap();
        assert!(d.mean().abs() < 1e-15 && (d.variance() - 1.0).abs() < 1e-12);
        let mut rng = rng_for(1, &[]);
        let n = 100_000;
        let neg = (0..n).filter(|_| d.sample(&mut rng) < 0.0).count() as f64 / n as f64;
        assert!((neg - 0.2).abs() < 0.005, "{neg}");
    }

    #[test]
    fn bounds_examples() {
        let g = DisorderLaw::gaussian();
        let (lo, hi) = hc_bounds(1.0, 0.5, &g).unwrap();
        assert!((lo - 2.0 / 3.0).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
        let (_, hi) = hc_bounds(0.5, 0.3, &DisorderLaw::binary()).unwrap();
        assert!((hi - 1f64.cosh().ln()).abs() < 1e-15);
        for &lam in &[0.1, 0.7, 3.0] {
            for &a in &[0.2, 0.5, 0.9] {
                let (lo, hi) = hc_bounds(lam, a, &g).unwrap();
                assert!((lo / hi - 1.0 / (1.0 + a)).abs() < 1e-14);
            }
        }
        assert!(hc_bounds(0.0, 0.5, &g).is_err());
    }

    #[test]
    fn window_is_enforced() {
        let mut d = DisorderLaw::binary();
        d.t0 = 1.0;
        assert!(matches!(hc_bounds(1.0, 0.5, &d), Err(Error::BoundUndefined { .. })));
    }
}

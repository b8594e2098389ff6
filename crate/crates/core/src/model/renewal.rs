use serde::{Deserialize, Serialize};

use crate::numerics::{softplus, tanh_sinh, CompensatedSum};
use crate::{Error, Result};

/// Slowly varying modulation of the inter-arrival tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlowlyVarying {
    Constant {
        c: f64,
    },
    /// `(log(1 + n))^a`
    LogPower {
        a: f64,
    },
}

impl SlowlyVarying {
    pub fn eval(&self, n: f64) -> f64 {
        match *self {
            SlowlyVarying::Constant { c } => c,
            SlowlyVarying::LogPower { a } => n.ln_1p().powf(a),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SlowlyVarying::Constant { c } if !(c > 0.0 && c.is_finite()) => {
                Err(Error::param("sv.c", format!("must be positive and finite, got {c}")))
            }
            SlowlyVarying::LogPower { a } if !a.is_finite() => {
                Err(Error::param("sv.a", format!("must be finite, got {a}")))
            }
            _ => Ok(()),
        }
    }
}

/// How the power law is turned into a probability distribution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailShape {
    /// `K(n) = C·L(n)/n^{1+α}` on every period multiple, `C` fixed by normalization.
    #[default]
    Normalized,
    /// `K(n) = L(n)/n^{1+α}` from the second period multiple on; `K(T)` takes
    /// the remaining mass.
    HeadAtom,
}

/// Inter-arrival law `K` on `T·ℕ` with a regularly varying tail.
///
/// `K` is tabulated up to the horizon `n_max·T`; `K̄(n_max·T)` carries the
/// analytic mass of all longer gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct TailedRenewalLaw {
    alpha: f64,
    period: usize,
    sv: SlowlyVarying,
    shape: TailShape,
    n_max: usize,
    scale: f64,
    k: Vec<f64>,
    tail: Vec<f64>,
}

const DIRECT_TAIL_FACTOR: usize = 64;
const DIRECT_TAIL_MIN: usize = 1 << 20;

pub fn build_renewal_law(alpha: f64, sv: SlowlyVarying, n_max: usize, period: usize) -> Result<TailedRenewalLaw> {
    TailedRenewalLaw::new(alpha, sv, n_max, period, TailShape::Normalized)
}

impl TailedRenewalLaw {
    pub fn new(alpha: f64, sv: SlowlyVarying, n_max: usize, period: usize, shape: TailShape) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::param("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        if n_max < 100 {
            return Err(Error::param("n_max", format!("must be at least 100, got {n_max}")));
        }
        if period == 0 {
            return Err(Error::param("period", "must be a positive integer"));
        }
        sv.validate()?;

        let horizon = n_max * period;
        let raw = |m: usize| -> f64 {
            let n = (m * period) as f64;
            sv.eval(n) / n.powf(1.0 + alpha)
        };
        let rest = power_tail_sum(alpha, period, sv, n_max);

        let mut k = vec![0.0; horizon + 1];
        let scale = match shape {
            TailShape::Normalized => {
                let mut partial = CompensatedSum::new();
                for m in (1..=n_max).rev() {
                    partial.add(raw(m));
                }
                let total = partial.value() + rest;
                if !(total.is_finite() && total > 0.0) {
                    return Err(Error::Normalization(format!("normalizing sum is {total}")));
                }
                for m in 1..=n_max {
                    k[m * period] = raw(m) / total;
                }
                1.0 / total
            }
            TailShape::HeadAtom => {
                let mut partial = CompensatedSum::new();
                for m in (2..=n_max).rev() {
                    partial.add(raw(m));
                }
                let head = 1.0 - partial.value() - rest;
                if !(head.is_finite() && head > 0.0) {
                    return Err(Error::Normalization(format!(
                        "power-law mass beyond the first period exceeds one (head atom would be {head})"
                    )));
                }
                k[period] = head;
                for m in 2..=n_max {
                    k[m * period] = raw(m);
                }
                1.0
            }
        };
        if !scale.is_finite() {
            return Err(Error::Normalization("normalizing constant is not finite".into()));
        }

        let mut tail = vec![0.0; horizon + 1];
        let mut acc = CompensatedSum::new();
        acc.add(rest * scale);
        tail[horizon] = acc.value();
        for n in (0..horizon).rev() {
            acc.add(k[n + 1]);
            tail[n] = acc.value();
        }

        Ok(Self {
            alpha,
            period,
            sv,
            shape,
            n_max,
            scale,
            k,
            tail,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn shape(&self) -> TailShape {
        self.shape
    }

    pub fn slowly_varying(&self) -> SlowlyVarying {
        self.sv
    }

    /// Largest tabulated gap, `n_max·T`.
    pub fn horizon(&self) -> usize {
        self.n_max * self.period
    }

    /// Slowly varying function including the normalizing constant, so that
    /// `K(n) ~ l_eff(n)/n^{1+α}`.
    pub fn l_eff(&self, n: f64) -> f64 {
        self.scale * self.sv.eval(n)
    }

    /// `P(τ₁ = n)`; beyond the table the analytic power law is returned.
    pub fn k(&self, n: usize) -> f64 {
        if n <= self.horizon() {
            self.k[n]
        } else if !n.is_multiple_of(self.period) {
            0.0
        } else {
            let x = n as f64;
            self.l_eff(x) / x.powf(1.0 + self.alpha)
        }
    }

    /// `P(τ₁ > n)` for `n ≤ horizon`.
    pub fn tail(&self, n: usize) -> f64 {
        self.tail[n]
    }

    /// `P(τ₁ > n)` for any `n`, beyond the table by Euler-Maclaurin.
    pub fn tail_extended(&self, n: usize) -> f64 {
        if n <= self.horizon() {
            self.tail[n]
        } else {
            let m = n / self.period;
            self.scale * power_tail_sum(self.alpha, self.period, self.sv, m)
        }
    }

    pub fn k_table(&self) -> &[f64] {
        &self.k
    }

    pub fn tail_table(&self) -> &[f64] {
        &self.tail
    }

    /// Draws a gap from a uniform `v ∈ (0,1)`; `None` means the gap exceeds
    /// the horizon.
    pub fn gap_from_uniform(&self, v: f64) -> Option<usize> {
        let t = &self.tail[1..];
        let idx = t.partition_point(|&x| x > v);
        if idx == t.len() {
            None
        } else {
            Some(idx + 1)
        }
    }

    /// Overwrites one table entry without renormalizing. Only useful to
    /// exercise [`check_invariants`](Self::check_invariants).
    pub fn with_corrupted_k(mut self, n: usize, value: f64) -> Self {
        self.k[n] = value;
        self
    }

    /// Verifies the structural invariants, naming the first one violated.
    pub fn check_invariants(&self) -> Result<()> {
        let h = self.horizon();
        let mut total = CompensatedSum::new();
        for &x in self.k.iter().rev() {
            total.add(x);
        }
        total.add(self.tail[h]);
        let err = (total.value() - 1.0).abs();
        if err > 1e-12 {
            return Err(Error::Invariant(format!(
                "normalization: sum K + tail(horizon) differs from 1 by {err:e}"
            )));
        }
        if (self.tail[0] - 1.0).abs() > 1e-12 {
            return Err(Error::Invariant(format!("tail(0) = {} != 1", self.tail[0])));
        }
        for n in 0..=h {
            let on = n % self.period == 0 && n > 0;
            if !on && self.k[n] != 0.0 {
                return Err(Error::Invariant(format!(
                    "support: K({n}) = {} off the period lattice",
                    self.k[n]
                )));
            }
            if on && !(self.k[n] > 0.0) {
                return Err(Error::Invariant(format!("positivity: K({n}) = {}", self.k[n])));
            }
            if n < h && self.tail[n + 1] > self.tail[n] {
                return Err(Error::Invariant(format!("tail not nonincreasing at {n}")));
            }
            if n < h && (self.tail[n] - self.tail[n + 1] - self.k[n + 1]).abs() > 1e-13 {
                return Err(Error::Invariant(format!("tail table inconsistent with K at {}", n + 1)));
            }
        }
        for frac in [4, 2, 1] {
            let m = (self.n_max / frac).max(2) * self.period;
            let x = m as f64;
            let r = self.k[m] * x.powf(1.0 + self.alpha) / self.l_eff(x);
            if (r - 1.0).abs() > 0.01 {
                return Err(Error::Invariant(format!(
                    "tail asymptotics: K(n)n^(1+a)/L(n) = {r} at n = {m}"
                )));
            }
        }
        Ok(())
    }
}

/// `Σ_{k > m} L(kT)/(kT)^{1+α}`: a long direct sum followed by an
/// Euler-Maclaurin remainder.
fn power_tail_sum(alpha: f64, period: usize, sv: SlowlyVarying, m: usize) -> f64 {
    let t = period as f64;
    let s = 1.0 + alpha;
    let f = |x: f64| sv.eval(x * t) / (x * t).powf(s);
    let big = (m * DIRECT_TAIL_FACTOR).max(DIRECT_TAIL_MIN);

    let bigf = big as f64;
    let integral = match sv {
        SlowlyVarying::Constant { c } => c * t.powf(-s) * bigf.powf(-alpha) / alpha,
        SlowlyVarying::LogPower { a } => {
            // x = M v^{-1/α} turns the tail integral into a bounded one.
            let pref = t.powf(-s) * bigf.powf(-alpha) / alpha;
            let ltm = (t * bigf).ln();
            let q = tanh_sinh(|_, v, _| softplus(ltm - v.ln() / alpha).powf(a), 0.0, 1.0, 1e-14);
            pref * q.value
        }
    };
    let hstep = 1e-3 * bigf;
    let fprime = (f(bigf + hstep) - f(bigf - hstep)) / (2.0 * hstep);
    let mut acc = CompensatedSum::new();
    acc.add(integral - 0.5 * f(bigf) - fprime / 12.0);
    for j in (m + 1..=big).rev() {
        acc.add(f(j as f64));
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZETA_3_2: f64 = 2.612_375_348_685_488;

    #[test]
    fn pure_power_normalizer_is_zeta() {
        let law = build_renewal_law(0.5, SlowlyVarying::Constant { c: 1.0 }, 1000, 1).unwrap();
        assert!((law.l_eff(5.0) - 1.0 / ZETA_3_2).abs() < 1e-12);
        assert!((law.k(1) - 1.0 / ZETA_3_2).abs() < 1e-12);
        law.check_invariants().unwrap();
    }

    #[test]
    fn tail_sum_against_integral_bounds() {
        // For decreasing f: ∫_{m+1}^∞ f ≤ Σ_{k>m} f(k) ≤ ∫_m^∞ f.
        for &alpha in &[0.3, 0.5, 0.8] {
            let m = 500usize;
            let s = power_tail_sum(alpha, 1, SlowlyVarying::Constant { c: 1.0 }, m);
            let lo = ((m + 1) as f64).powf(-alpha) / alpha;
            let hi = (m as f64).powf(-alpha) / alpha;
            assert!(lo < s && s < hi, "{alpha}: {lo} {s} {hi}");
        }
    }

    #[test]
    fn log_power_tail_matches_long_direct_sum() {
        let sv = SlowlyVarying::LogPower { a: 1.0 };
        let m = 100usize;
        let s = power_tail_sum(0.5, 1, sv, m);
        // Independent route: direct sum to 4e6 plus crude integral remainder.
        let mut direct = 0.0;
        let top = 4_000_000usize;
        for k in (m + 1..=top).rev() {
            let x = k as f64;
            direct += x.ln_1p() / x.powf(1.5);
        }
        let x = top as f64;
        // ∫_x^∞ ln(u)/u^{3/2} du = 2(ln x + 2)/√x
        direct += 2.0 * (x.ln() + 2.0) / x.sqrt() - 0.5 * x.ln_1p() / x.powf(1.5);
        assert!((s - direct).abs() < 1e-9 * s, "{s} vs {direct}");
    }

    #[test]
    fn periodic_support_and_tail() {
        let law = build_renewal_law(0.3, SlowlyVarying::Constant { c: 2.0 }, 200, 3).unwrap();
        law.check_invariants().unwrap();
        assert_eq!(law.k(4), 0.0);
        assert!(law.k(3) > 0.0);
        assert!((law.tail(0) - 1.0).abs() < 1e-12);
        assert_eq!(law.tail(1), law.tail(2));
        assert_eq!(law.k(601), 0.0);
        assert!(law.k(603) > 0.0 && law.k(603) < law.k(600));
    }

    #[test]
    fn srw_like_head_atom() {
        let c = (2.0 / std::f64::consts::PI).sqrt();
        let law = TailedRenewalLaw::new(0.5, SlowlyVarying::Constant { c }, 5000, 2, TailShape::HeadAtom).unwrap();
        law.check_invariants().unwrap();
        for &n in &[100usize, 1000, 5000] {
            let r = law.k(2 * n) * 2.0 * std::f64::consts::PI.sqrt() * (n as f64).powf(1.5);
            assert!((r - 1.0).abs() < 1e-12, "{r}");
        }
        let expected_head = 1.0 - c * 2f64.powf(-1.5) * (ZETA_3_2 - 1.0);
        assert!((law.k(2) - expected_head).abs() < 1e-10, "{}", law.k(2));
    }

    #[test]
    fn gap_inversion() {
        let law = build_renewal_law(0.5, SlowlyVarying::Constant { c: 1.0 }, 100, 1).unwrap();
        assert_eq!(law.gap_from_uniform(0.999), Some(1));
        assert_eq!(law.gap_from_uniform(1e-9), None);
        let v = law.tail(3) + 1e-12;
        assert_eq!(law.gap_from_uniform(v), Some(3));
    }

    #[test]
    fn rejects_bad_inputs() {
        let sv = SlowlyVarying::Constant { c: 1.0 };
        assert!(build_renewal_law(1.0, sv, 1000, 1).is_err());
        assert!(build_renewal_law(0.0, sv, 1000, 1).is_err());
        assert!(build_renewal_law(0.5, sv, 10, 1).is_err());
        assert!(build_renewal_law(0.5, SlowlyVarying::Constant { c: -1.0 }, 1000, 1).is_err());
        let big = SlowlyVarying::Constant { c: 10.0 };
        assert!(matches!(
            TailedRenewalLaw::new(0.5, big, 1000, 1, TailShape::HeadAtom),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn corruption_is_detected() {
        let law = build_renewal_law(0.5, SlowlyVarying::Constant { c: 1.0 }, 200, 1).unwrap();
        let bad = law.with_corrupted_k(17, 0.5);
        let err = bad.check_invariants().unwrap_err();
        assert!(err.to_string().contains("normalization"), "{err}");
    }
}

//! Log-domain arithmetic, compensated summation and tanh-sinh quadrature.

use std::f64::consts::{FRAC_PI_2, LN_2, SQRT_2};

pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let mut acc = LogAccumulator::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Streaming log-sum-exp.
#[derive(Debug, Clone, Copy)]
pub struct LogAccumulator {
    max: f64,
    sum: f64,
}

impl Default for LogAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl LogAccumulator {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.sum += (x - self.max).exp();
        }
    }

    /// Adds `exp(scale) * mantissa` for a nonnegative mantissa.
    #[inline]
    pub fn add_scaled(&mut self, scale: f64, mantissa: f64) {
        if mantissa > 0.0 {
            self.add(scale + mantissa.ln());
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

/// `log(1 + e^x)` without overflow.
#[inline]
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// `log(½(1 + e^x))`, the log of a sign-averaged excursion weight.
#[inline]
pub fn log_half_one_plus_exp(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    softplus(x) - LN_2
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / SQRT_2)
}

/// Standard normal quantile.
pub fn normal_quantile(u: f64) -> f64 {
    -SQRT_2 * statrs::function::erf::erfc_inv(2.0 * u)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const TS_T_MAX: f64 = 6.0;
const TS_MAX_LEVEL: u32 = 12;

/// Tanh-sinh quadrature of `f` over `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)` so that endpoint singularities
/// can be evaluated from the exact distances rather than from `x`.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Quadrature
where
    F: FnMut(f64, f64, f64) -> f64,
{
    let half = 0.5 * (b - a);
    if half <= 0.0 {
        return Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        };
    }
    let mid = a + half;
    let mut evals = 0usize;

    let mut node_pair = |t: f64, f: &mut F| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cu * cu);
        let dist = half * (-u).exp() / cu;
        if dist <= 0.0 || !w.is_finite() || w == 0.0 {
            return 0.0;
        }
        let other = 2.0 * half - dist;
        evals += 2;
        let right = f(b - dist, other, dist);
        let left = f(a + dist, dist, other);
        w * (left + right)
    };

    let mut h = 1.0;
    let mut sum = FRAC_PI_2 * f(mid, half, half);
    let mut k = 1;
    while k as f64 * h <= TS_T_MAX {
        sum += node_pair(k as f64 * h, &mut f);
        k += 1;
    }
    let mut estimate = sum * h * half;
    let mut error = f64::INFINITY;

    for level in 1..=TS_MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= TS_T_MAX {
            sum += node_pair(k as f64 * h, &mut f);
            k += 2;
        }
        let next = sum * h * half;
        error = (next - estimate).abs();
        estimate = next;
        if level >= 3 && error <= rel_tol * estimate.abs() {
            break;
        }
    }
    Quadrature {
        value: estimate,
        error,
        evaluations: evals + 1,
    }
}

/// `∫_a^b f(x) dx` for an integrand of `x` alone.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    tanh_sinh(|x, _, _| f(x), a, b, rel_tol).value
}

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::rng::hash_uniform;
use crate::{Error, Result};

/// `C = α/Γ(1−α)`, the Lévy-measure constant giving Laplace exponent `λ^α`.
pub fn levy_constant(alpha: f64) -> f64 {
    alpha / gamma(1.0 - alpha)
}

/// Excursion intervals of width `≥ η` of an α-stable regenerative set,
/// observed up to the first time its image passes `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcursionDecomposition {
    pub t: f64,
    pub alpha: f64,
    pub eta: f64,
    /// Sorted disjoint open intervals; the last one may straddle `t`.
    pub gaps: Vec<(f64, f64)>,
    /// Fair sign of each gap.
    pub signs: Vec<u8>,
    pub local_time: f64,
    /// Lebesgue mass of `[0, t]` swept by sub-cutoff jumps.
    pub drift_comp: f64,
    /// Key for fair signs attached to points not covered by a gap.
    pub sign_key: u64,
}

pub fn sample_regenerative_excursions<R: Rng + ?Sized>(
    t: f64,
    alpha: f64,
    eta: f64,
    rng: &mut R,
) -> Result<ExcursionDecomposition> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    if !(eta > 0.0 && eta <= t / 10.0) {
        return Err(Error::param(
            "eta",
            format!("must lie in (0, t/10] = (0, {}], got {eta}", t / 10.0),
        ));
    }
    let c = levy_constant(alpha);
    let rate = c * eta.powf(-alpha) / alpha;
    let drift = c * eta.powf(1.0 - alpha) / (1.0 - alpha);
    let wait = Exp::new(rate).expect("positive rate");

    let sign_key = rng.random::<u64>();
    let mut gaps = Vec::new();
    let mut signs = Vec::new();
    let mut pos = 0.0;
    let mut local = 0.0;
    let mut swept = 0.0;
    loop {
        let e = wait.sample(rng);
        let advance = drift * e;
        if pos + advance >= t {
            local += (t - pos) / drift;
            swept += t - pos;
            break;
        }
        pos += advance;
        swept += advance;
        local += e;
        let u = 1.0 - rng.random::<f64>();
        let width = eta * u.powf(-1.0 / alpha);
        gaps.push((pos, pos + width));
        signs.push(u8::from(rng.random::<bool>()));
        pos += width;
        if pos >= t {
            break;
        }
    }
    Ok(ExcursionDecomposition {
        t,
        alpha,
        eta,
        gaps,
        signs,
        local_time: local,
        drift_comp: swept,
        sign_key,
    })
}

/// Ratio between successive cutoffs in [`sample_last_zero`].
const REFINE: f64 = 1e-3;
const FLOOR: f64 = 1e-13;

enum Segment {
    Crossed(f64),
    Exhausted(f64),
}

/// `g_t = sup{s ≤ t: s in the set}` for a set started at `0`.
///
/// Jumps of width `≥ eta` are simulated exactly. When the compensating drift
/// for smaller jumps would carry the set across `t`, that stretch of local
/// time is resimulated with jumps in `[eta·10⁻³, eta)` and so on, so the last
/// zero is resolved at every scale rather than snapped to `t`.
pub fn sample_last_zero<R: Rng + ?Sized>(t: f64, alpha: f64, eta: f64, rng: &mut R) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    if !(eta > 0.0 && eta <= t / 10.0) {
        return Err(Error::param(
            "eta",
            format!("must lie in (0, t/10] = (0, {}], got {eta}", t / 10.0),
        ));
    }
    let c = levy_constant(alpha);
    Ok(match last_zero_level(t, alpha, c, f64::INFINITY, eta, 0.0, None, rng) {
        Segment::Crossed(g) | Segment::Exhausted(g) => g,
    })
}

/// Set built from jumps in `[lo, hi)` plus drift, from `start` for at most
/// `budget` units of local time.
#[allow(clippy::too_many_arguments)]
fn last_zero_level<R: Rng + ?Sized>(
    t: f64,
    alpha: f64,
    c: f64,
    hi: f64,
    lo: f64,
    start: f64,
    budget: Option<f64>,
    rng: &mut R,
) -> Segment {
    let rate = c * (lo.powf(-alpha) - hi.powf(-alpha)) / alpha;
    let drift = c * lo.powf(1.0 - alpha) / (1.0 - alpha);
    let wait = Exp::new(rate).expect("positive rate");
    let (top, bottom) = (hi.powf(-alpha), lo.powf(-alpha));
    let mut pos = start;
    let mut used = 0.0;
    loop {
        let mut e = wait.sample(rng);
        let last = budget.is_some_and(|b| used + e >= b);
        if let Some(b) = budget.filter(|_| last) {
            e = b - used;
        }
        if pos + drift * e >= t {
            if lo * REFINE < FLOOR * t {
                return Segment::Crossed(pos);
            }
            match last_zero_level(t, alpha, c, lo, lo * REFINE, pos, Some(e), rng) {
                Segment::Crossed(g) => return Segment::Crossed(g),
                Segment::Exhausted(p) => pos = p,
            }
        } else {
            pos += drift * e;
        }
        if last {
            return Segment::Exhausted(pos);
        }
        used += e;
        let u: f64 = rng.random();
        let width = (bottom - u * (bottom - top)).powf(-1.0 / alpha);
        if pos + width >= t {
            return Segment::Crossed(pos);
        }
        pos += width;
    }
}

impl ExcursionDecomposition {
    /// Index of the gap `(l, r)` with `l < s < r`.
    pub fn gap_index_containing(&self, s: f64) -> Option<usize> {
        let i = self.gaps.partition_point(|&(l, _)| l < s);
        if i == 0 {
            return None;
        }
        let (_, r) = self.gaps[i - 1];
        (s < r).then_some(i - 1)
    }

    /// End of the observed range: `t`, or the right end of a gap straddling it.
    pub fn observed_end(&self) -> f64 {
        self.gaps.last().map_or(self.t, |&(_, r)| r.max(self.t))
    }

    /// `d_s = inf{u ≥ s: u in the set}` for `s` within the observed range.
    pub fn first_point_after(&self, s: f64) -> Option<f64> {
        if s > self.observed_end() {
            return None;
        }
        Some(self.gap_index_containing(s).map_or(s, |i| self.gaps[i].1))
    }

    /// `g_s = sup{u ≤ s: u in the set}`.
    pub fn last_point_before(&self, s: f64) -> Option<f64> {
        if s > self.observed_end() {
            return None;
        }
        Some(self.gap_index_containing(s).map_or(s, |i| self.gaps[i].0))
    }

    /// Sign of the excursion straddling `s`; points off the resolved gaps get
    /// a fair sign keyed by `index`.
    pub fn sign_at(&self, s: f64, index: u64) -> u8 {
        match self.gap_index_containing(s) {
            Some(i) => self.signs[i],
            None => u8::from(hash_uniform(self.sign_key, index) < 0.5),
        }
    }

    /// Total gap length inside `(0, t)`.
    pub fn covered_mass(&self) -> f64 {
        self.gaps.iter().map(|&(l, r)| r.min(self.t) - l).sum()
    }

    /// The same set seen with a larger cutoff: narrower gaps become drift.
    pub fn coarsen(&self, eta: f64) -> Self {
        let mut out = self.clone();
        out.eta = eta.max(self.eta);
        out.gaps.clear();
        out.signs.clear();
        let last = self.gaps.len().saturating_sub(1);
        for (i, (&(l, r), &s)) in self.gaps.iter().zip(&self.signs).enumerate() {
            if r - l >= out.eta || (i == last && r > self.t) {
                out.gaps.push((l, r));
                out.signs.push(s);
            } else {
                out.drift_comp += r - l;
            }
        }
        out
    }

    pub fn check_invariants(&self) -> Result<()> {
        if self.gaps.len() != self.signs.len() {
            return Err(Error::Invariant("one sign per gap".into()));
        }
        let mut prev = 0.0;
        let last = self.gaps.len().saturating_sub(1);
        for (i, &(l, r)) in self.gaps.iter().enumerate() {
            let straddles = i == last && r > self.t;
            if !(l >= prev && r > l) || (r - l < self.eta && !straddles) {
                return Err(Error::Invariant(format!("gap {i} = ({l}, {r}) is malformed")));
            }
            prev = r;
        }
        let uncovered = self.t - self.covered_mass();
        let slack = 1e-9 * self.t;
        if uncovered > self.drift_comp + self.eta * (self.gaps.len() + 1) as f64 + slack {
            return Err(Error::Invariant(format!(
                "uncovered mass {uncovered} exceeds compensator"
            )));
        }
        Ok(())
    }
}
